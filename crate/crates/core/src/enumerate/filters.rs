//! Pruning predicates on complete triangulations.

use crate::triangulation::{
    compute_boundary, compute_edge_classes, fundamental_group, EdgeClass, EdgeStructure, Triangulation,
};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FilterName {
    /// Edges identified with themselves reversed.
    Manifold,
    LowValence,
    Boundary,
    /// Free `π₁`: a genus `g ≥ 2` surface group does not embed in a free
    /// group, so the boundary is compressible.
    FreeGroup,
}

impl FilterName {
    pub const ALL: [FilterName; 4] =
        [FilterName::Manifold, FilterName::LowValence, FilterName::Boundary, FilterName::FreeGroup];

    pub fn as_str(self) -> &'static str {
        match self {
            FilterName::Manifold => "manifold",
            FilterName::LowValence => "low-valence",
            FilterName::Boundary => "boundary",
            FilterName::FreeGroup => "free-group",
        }
    }
}

impl std::str::FromStr for FilterName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FilterName::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| format!("unknown filter `{s}` (known: manifold, low-valence, boundary, free-group)"))
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Verdict {
    Keep,
    Discard { reason: &'static str, witness_edge: Option<usize> },
}

impl Verdict {
    pub fn is_keep(&self) -> bool {
        matches!(self, Verdict::Keep)
    }
}

/// The low-valence reason for a closed edge class, if any.
pub(crate) fn low_valence_reason(class: &EdgeClass) -> Option<&'static str> {
    match (class.valence(), class.distinct_tets()) {
        (1, _) => Some("valence 1"),
        (2, 2) => Some("2-0 reducible"),
        (3, 3) => Some("3-2 reducible"),
        _ => None,
    }
}

pub fn filter_manifold(edges: &EdgeStructure) -> Verdict {
    match edges.classes.iter().position(|c| c.self_reversed) {
        Some(e) => Verdict::Discard { reason: "edge identified with its reverse", witness_edge: Some(e) },
        None => Verdict::Keep,
    }
}

pub fn filter_low_valence(t: &Triangulation) -> Verdict {
    low_valence_on(&compute_edge_classes(t))
}

pub(crate) fn low_valence_on(edges: &EdgeStructure) -> Verdict {
    for (k, class) in edges.classes.iter().enumerate() {
        if class.self_reversed {
            continue;
        }
        if let Some(reason) = low_valence_reason(class) {
            return Verdict::Discard { reason, witness_edge: Some(k) };
        }
    }
    Verdict::Keep
}

pub fn filter_boundary(t: &Triangulation) -> Verdict {
    let b = compute_boundary(t);
    let discard = |reason| Verdict::Discard { reason, witness_edge: None };
    if !b.is_orientable() {
        return discard("non-orientable boundary");
    }
    if b.components.iter().any(|c| c.euler_characteristic > 0) {
        return discard("sphere boundary component");
    }
    if !b.components.iter().any(|c| c.euler_characteristic < 0) {
        return discard("no boundary component of negative Euler characteristic");
    }
    Verdict::Keep
}

pub fn filter_free_group(t: &Triangulation) -> Verdict {
    if fundamental_group(t).is_evidently_free() {
        Verdict::Discard { reason: "free fundamental group", witness_edge: None }
    } else {
        Verdict::Keep
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Perm4;
    use crate::triangulation::Gluing;

    #[test]
    fn identity_double_is_reducible_and_spherical() {
        let id = Perm4::IDENTITY;
        let row = |tet| std::array::from_fn(|f| Gluing { tet, face: f, perm: id });
        let t = Triangulation::new(vec![row(1), row(0)]).unwrap();
        assert_eq!(filter_low_valence(&t), Verdict::Discard { reason: "2-0 reducible", witness_edge: Some(0) });
        assert!(matches!(filter_boundary(&t), Verdict::Discard { reason: "sphere boundary component", .. }));
    }

    #[test]
    fn names_parse() {
        for f in FilterName::ALL {
            assert_eq!(f.as_str().parse::<FilterName>().unwrap(), f);
        }
        assert!("nope".parse::<FilterName>().is_err());
    }
}
