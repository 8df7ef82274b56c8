//! JSON renderings of library results. Rationals are always `"p/q"` strings
//! and points are named by label.

use loometric::embed::{EmbedError, InfeasibleReason, Violation};
use loometric::gh::{PartitionWitness, WitnessKind, WitnessViolation};
use loometric::pattern::Collision;
use loometric::rational::format_rational;
use loometric::{
    DistancePattern, Embedding, FiniteMetricSpace, GhResult, InfeasibleReport, MetricError, Pair,
    Proof, Rational, SimplexWitness, StripFiltration, Verification,
};
use serde_json::{json, Value};

fn q(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

fn labels(space: &FiniteMetricSpace, points: &[usize]) -> Value {
    points.iter().map(|&p| space.label(p)).collect()
}

fn pair(space: &FiniteMetricSpace, (i, j): Pair) -> Value {
    json!([space.label(i), space.label(j)])
}

pub fn metric_error(err: &MetricError) -> Value {
    let indices: Vec<usize> = match *err {
        MetricError::NegativeEntry(i, j)
        | MetricError::Asymmetric(i, j)
        | MetricError::ZeroOffDiagonal(i, j) => vec![i, j],
        MetricError::NonzeroDiagonal(i) => vec![i],
        MetricError::TriangleViolation(i, j, k) => vec![i, j, k],
        MetricError::NotSquare { row, .. } => vec![row],
        MetricError::DuplicateLabel { first, second, .. } => vec![first, second],
        MetricError::LabelCount { .. } => vec![],
    };
    json!({
        "valid": false,
        "error": err.kind(),
        "indices": indices,
        "message": err.to_string(),
    })
}

pub fn pattern(space: &FiniteMetricSpace, p: &DistancePattern) -> Value {
    json!({
        "points": space.len(),
        "injective": p.is_injective(),
        "classes": p.blocks().iter().map(|b| json!({
            "value": q(&b.value),
            "pairs": b.pairs.iter().map(|&pr| pair(space, pr)).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

pub fn simplex(space: &FiniteMetricSpace, w: &SimplexWitness) -> Value {
    json!({
        "size": w.len(),
        "side": q(&w.side),
        "points": labels(space, &w.points),
        "dim_lower_bound": w.dimension(),
    })
}

pub fn violation(space: &FiniteMetricSpace, v: &Violation) -> Value {
    match *v {
        Violation::Coincident { first, second } => json!({
            "kind": "Coincident",
            "points": labels(space, &[first, second]),
        }),
        Violation::SplitClass { first, second } => json!({
            "kind": "SplitClass",
            "first": pair(space, first),
            "second": pair(space, second),
        }),
        Violation::MergedClass { first, second } => json!({
            "kind": "MergedClass",
            "first": pair(space, first),
            "second": pair(space, second),
        }),
    }
}

pub fn embedding(space: &FiniteMetricSpace, e: &Embedding) -> Value {
    let coords: serde_json::Map<String, Value> = e
        .coords
        .iter()
        .enumerate()
        .map(|(i, c)| (space.label(i).to_string(), c.iter().map(q).collect()))
        .collect();
    let verified = match &e.verified {
        Verification::Loose => json!("loose"),
        Verification::Unverified => json!("unverified"),
        Verification::Violated(v) => json!({ "violated": violation(space, v) }),
    };
    json!({ "dim": e.dim, "coords": coords, "verified": verified })
}

fn collision(space: &FiniteMetricSpace, c: &Collision) -> Value {
    json!({ "first": pair(space, c.first), "second": pair(space, c.second) })
}

pub fn embed_error(space: &FiniteMetricSpace, err: &EmbedError) -> Value {
    let kind = match err {
        EmbedError::PointCountMismatch { .. } => "PointCountMismatch",
        EmbedError::DimMismatch { .. } => "DimMismatch",
        EmbedError::NotInjective(_) => "NotInjective",
        EmbedError::GenericityExhausted { .. } => "GenericityExhausted",
        EmbedError::NonPositiveEps => "NonPositiveEps",
        EmbedError::EpsTooLarge { .. } => "EpsTooLarge",
        EmbedError::PerturbationExhausted { .. } => "PerturbationExhausted",
        EmbedError::VerificationFailed(_) => "VerificationFailed",
    };
    let mut out = json!({ "error": kind, "message": err.to_string() });
    match err {
        EmbedError::NotInjective(c) => out["collision"] = collision(space, c),
        EmbedError::EpsTooLarge { eps, limit } => {
            out["eps"] = q(eps);
            out["limit"] = q(limit);
        }
        EmbedError::VerificationFailed(v) => out["violation"] = violation(space, v),
        _ => {}
    }
    out
}

pub fn infeasible(space: &FiniteMetricSpace, r: &InfeasibleReport) -> Value {
    json!({
        "infeasible": true,
        "dim": r.dim,
        "reason": match r.reason {
            InfeasibleReason::SimplexObstruction => "SimplexObstruction",
            InfeasibleReason::SearchExhausted => "SearchExhausted",
        },
        "best_residual": r.best_residual,
        "restarts": r.restarts,
        "certificate": r.certificate.as_ref().map(|w| simplex(space, w)),
    })
}

pub fn gh(r: &GhResult) -> Value {
    let proof = match &r.proof {
        Proof::Exact => json!("exact"),
        Proof::Bounds { lower, upper } => json!({ "lower": q(lower), "upper": q(upper) }),
    };
    json!({
        "value": q(&r.value),
        "proof": proof,
        "correspondence": r.correspondence.pairs().iter().map(|&(i, j)| json!([i, j])).collect::<Vec<_>>(),
    })
}

pub fn witness(space: &FiniteMetricSpace, w: &PartitionWitness) -> Value {
    let kind = match w.kind {
        WitnessKind::Injectivity => json!("injectivity"),
        WitnessKind::Dimension { order } => json!({ "dimension": order }),
    };
    json!({
        "holds": true,
        "blocks": w.blocks.iter().map(|b| labels(space, b)).collect::<Vec<_>>(),
        "N": w.n,
        "M": w.m,
        "kind": kind,
        "search_space": w.search_space.as_str(),
    })
}

pub fn witness_violation(space: &FiniteMetricSpace, v: &WitnessViolation) -> Value {
    let detail = match v {
        WitnessViolation::Mesh { block, diameter } => json!({
            "kind": "Mesh", "block": block, "diameter": q(diameter),
        }),
        WitnessViolation::Separation { first, second, gap } => json!({
            "kind": "Separation",
            "first": pair(space, *first),
            "second": pair(space, *second),
            "gap": q(gap),
        }),
        WitnessViolation::Overlap { family, member, distance } => json!({
            "kind": "Overlap", "family": family, "member": member, "distance": q(distance),
        }),
    };
    json!({ "holds": false, "violation": detail })
}

pub fn strip(space: &FiniteMetricSpace, f: &StripFiltration) -> Value {
    json!({
        "thresholds": f.thresholds.iter().map(q).collect::<Vec<_>>(),
        "layers": f.layers.iter().map(|l| labels(space, l)).collect::<Vec<_>>(),
        "residue": labels(space, &f.residue),
    })
}
