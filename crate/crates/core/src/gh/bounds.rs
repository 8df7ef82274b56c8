use super::{value_hausdorff, Correspondence};
use crate::rational::{abs_diff, ratio, Rational};
use crate::space::FiniteMetricSpace;

/// Greedy starts tried by [`gh_bounds`].
const GREEDY_STARTS: usize = 8;

/// Cheap bracket `(lower, upper)` around `d_GH(X, Y)`.
///
/// Any correspondence with distortion `e` pairs every distance value of one
/// space (including 0) with a value of the other within `e`, and pairs points
/// whose eccentricities differ by at most `e`. Half the largest of these
/// Hausdorff gaps, and of the diameter gap, is the lower bound. The upper
/// bound is half the distortion of the best greedy correspondence.
///
/// Both spaces must be nonempty, or both empty.
pub fn gh_bounds(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> (Rational, Rational) {
    let lower = lower_bound(x, y);
    let (upper, _) = best_greedy(x, y);
    (lower, upper * ratio(1, 2))
}

pub(crate) fn lower_bound(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> Rational {
    assert_nonempty_pair(x, y);
    let values = |s: &FiniteMetricSpace| {
        let mut v: Vec<Rational> = std::iter::once(Rational::default())
            .chain(s.pairs().map(|(i, j)| s.dist(i, j).clone()))
            .collect();
        v.sort();
        v.dedup();
        v
    };
    let eccentricities = |s: &FiniteMetricSpace| (0..s.len()).map(|i| s.eccentricity(i)).collect::<Vec<_>>();
    let diam = abs_diff(&x.diameter(), &y.diameter());
    let by_values = value_hausdorff(&values(x), &values(y));
    let by_ecc = value_hausdorff(&eccentricities(x), &eccentricities(y));
    diam.max(by_values).max(by_ecc) * ratio(1, 2)
}

pub(crate) fn assert_nonempty_pair(x: &FiniteMetricSpace, y: &FiniteMetricSpace) {
    assert!(
        x.is_empty() == y.is_empty(),
        "no correspondence exists between an empty and a nonempty space"
    );
}

/// Smallest distortion over the greedy starts, with its correspondence.
pub(crate) fn best_greedy(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> (Rational, Correspondence) {
    assert_nonempty_pair(x, y);
    if x.is_empty() {
        return (Rational::default(), Correspondence::identity(0));
    }
    let x0 = eccentricity_order(x)[0];
    let e0 = x.eccentricity(x0);
    let mut starts: Vec<usize> = (0..y.len()).collect();
    starts.sort_by_key(|&j| (abs_diff(&y.eccentricity(j), &e0), j));
    starts.truncate(GREEDY_STARTS);

    let mut best: Option<(Rational, Correspondence)> = None;
    let mut consider = |c: Correspondence| {
        let d = c.distortion(x, y);
        if best.as_ref().is_none_or(|(b, _)| &d < b) {
            best = Some((d, c));
        }
    };
    if x.len() == y.len() {
        consider(Correspondence::identity(x.len()));
    }
    for start in starts {
        consider(greedy_correspondence(x, y, start));
    }
    best.expect("at least one start")
}

/// Points by decreasing eccentricity, ties by index.
pub(crate) fn eccentricity_order(s: &FiniteMetricSpace) -> Vec<usize> {
    let ecc: Vec<Rational> = (0..s.len()).map(|i| s.eccentricity(i)).collect();
    let mut order: Vec<usize> = (0..s.len()).collect();
    order.sort_by(|&a, &b| ecc[b].cmp(&ecc[a]).then(a.cmp(&b)));
    order
}

/// Builds a correspondence one pair at a time, always taking the cheapest
/// extension. The most eccentric point of `X` is sent to `start`; the other
/// `X` points follow in eccentricity order, then uncovered `Y` points pick
/// preimages. Ties go to the smaller index.
pub fn greedy_correspondence(x: &FiniteMetricSpace, y: &FiniteMetricSpace, start: usize) -> Correspondence {
    assert!(!x.is_empty() && start < y.len());
    let cost = |pairs: &[(usize, usize)], a: usize, b: usize| -> Rational {
        pairs
            .iter()
            .map(|&(c, d)| abs_diff(x.dist(a, c), y.dist(b, d)))
            .max()
            .unwrap_or_default()
    };
    let order = eccentricity_order(x);
    let mut pairs = vec![(order[0], start)];
    let mut covered = vec![false; y.len()];
    covered[start] = true;
    for &a in &order[1..] {
        let b = (0..y.len())
            .min_by_key(|&b| (cost(&pairs, a, b), b))
            .expect("nonempty");
        covered[b] = true;
        pairs.push((a, b));
    }
    for b in 0..y.len() {
        if !covered[b] {
            let a = (0..x.len())
                .min_by_key(|&a| (cost(&pairs, a, b), a))
                .expect("nonempty");
            pairs.push((a, b));
        }
    }
    pairs.sort_unstable();
    Correspondence::from_sorted(pairs)
}
