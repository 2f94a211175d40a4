//! Spherical / affine / non-affine classification of each irreducible factor,
//! and the group-level verdicts derived from it: the amenable radical,
//! C*-simplicity with unique trace, and primitivity.

use std::fmt;

use serde::Serialize;

use crate::coxeter::CoxeterMatrix;
use crate::recognize::{recognize, Family, NamedType};
use crate::scalar::ScalarError;
use crate::tits::{gram, signature, Signature};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Kind {
    Spherical,
    Affine,
    NonAffine,
}

impl Kind {
    /// `q = r = 0` is spherical, `(p, 0, 1)` affine, anything else non-affine.
    pub fn from_signature(sig: Signature) -> Kind {
        match (sig.q, sig.r) {
            (0, 0) => Kind::Spherical,
            (0, 1) => Kind::Affine,
            _ => Kind::NonAffine,
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Spherical => "Spherical",
            Kind::Affine => "Affine",
            Kind::NonAffine => "NonAffine",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentClass {
    /// Generator indices in the ambient matrix.
    pub vertices: Vec<usize>,
    pub kind: Kind,
    pub name: NamedType,
    pub signature: Signature,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("positive definite component on generators {0:?} matched no spherical template")]
    UnnamedSpherical(Vec<usize>),
}

/// Classifies a connected matrix. `vertices` are recorded as `0..n`.
pub fn classify_component(m: &CoxeterMatrix) -> Result<ComponentClass, ScalarError> {
    let sig = signature(&gram(m)?);
    Ok(ComponentClass {
        vertices: (0..m.rank()).collect(),
        kind: Kind::from_signature(sig),
        name: recognize(m),
        signature: sig,
    })
}

/// The spherical and affine factors, whose product is the amenable radical.
/// Empty exactly when every factor is non-affine.
pub fn amenable_radical(components: &[ComponentClass]) -> Vec<ComponentClass> {
    components
        .iter()
        .filter(|c| c.kind != Kind::NonAffine)
        .cloned()
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CstarVerdict {
    pub simple: bool,
    pub unique_trace: bool,
}

/// Simple, with a unique normalized trace, iff every factor is non-affine.
pub fn cstar_verdict(components: &[ComponentClass]) -> CstarVerdict {
    let simple = components.iter().all(|c| c.kind == Kind::NonAffine);
    CstarVerdict {
        simple,
        unique_trace: simple,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Primitivity {
    pub primitive: bool,
    pub reason: String,
}

impl Primitivity {
    fn yes(reason: impl Into<String>) -> Self {
        Primitivity {
            primitive: true,
            reason: reason.into(),
        }
    }

    fn no(reason: impl Into<String>) -> Self {
        Primitivity {
            primitive: false,
            reason: reason.into(),
        }
    }
}

fn is_prime(m: u32) -> bool {
    m >= 2 && (2..).take_while(|d| d * d <= m).all(|d| !m.is_multiple_of(d))
}

/// Primitivity of the whole group.
///
/// Reducible groups are never primitive. An irreducible infinite group is
/// primitive iff it is non-affine. Among finite irreducible groups exactly
/// `A_n`, `D_{2k+1}`, `E_6` and `I_2(p)` for odd primes `p` are primitive.
pub fn primitivity(components: &[ComponentClass]) -> Result<Primitivity, ClassifyError> {
    let [c] = components else {
        return Ok(Primitivity::no(format!(
            "reducible: {} irreducible factors",
            components.len()
        )));
    };
    match c.kind {
        Kind::NonAffine => Ok(Primitivity::yes("irreducible and non-affine")),
        Kind::Affine => Ok(Primitivity::no("affine groups are not primitive")),
        Kind::Spherical => {
            let name = c.name;
            if !name.is_spherical() {
                return Err(ClassifyError::UnnamedSpherical(c.vertices.clone()));
            }
            let verdict = match name.family {
                Family::A => Primitivity::yes(format!("{name} acts primitively")),
                Family::D if name.rank % 2 == 1 => Primitivity::yes(format!("{name} acts primitively")),
                Family::E if name.rank == 6 => Primitivity::yes("E_6 acts primitively"),
                Family::I2 => {
                    let m = name.label.expect("dihedral label");
                    if m % 2 == 0 {
                        Primitivity::no(format!("{name} has centre of order 2"))
                    } else if is_prime(m) {
                        Primitivity::yes(format!("{name} with {m} an odd prime"))
                    } else {
                        Primitivity::no(format!("{name} with {m} odd and not prime"))
                    }
                }
                _ => Primitivity::no(format!("{name} has centre of order 2")),
            };
            Ok(verdict)
        }
    }
}

/// Everything decided about a (possibly reducible) Coxeter group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationReport {
    pub components: Vec<ComponentClass>,
    pub amenable_radical_factors: Vec<ComponentClass>,
    pub cstar: CstarVerdict,
    pub primitive: Primitivity,
}

pub fn classify(m: &CoxeterMatrix) -> Result<ClassificationReport, ClassifyError> {
    let mut components = Vec::new();
    for part in m.components() {
        let mut class = classify_component(&part.matrix)?;
        class.vertices = part.vertices;
        components.push(class);
    }
    Ok(ClassificationReport {
        amenable_radical_factors: amenable_radical(&components),
        cstar: cstar_verdict(&components),
        primitive: primitivity(&components)?,
        components,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::Label::{Finite as F, Infinity as Inf};

    fn triangle_inf() -> CoxeterMatrix {
        CoxeterMatrix::from_edges(3, &[(0, 1, Inf), (1, 2, Inf), (0, 2, Inf)])
    }

    fn named(family: Family, rank: u32) -> CoxeterMatrix {
        NamedType::new(family, rank).template().unwrap()
    }

    #[test]
    fn component_kinds() {
        let a2 = classify_component(&named(Family::A, 2)).unwrap();
        assert_eq!((a2.kind, a2.signature), (Kind::Spherical, Signature::new(2, 0, 0)));
        let at2 = classify_component(&named(Family::ATilde, 2)).unwrap();
        assert_eq!((at2.kind, at2.signature), (Kind::Affine, Signature::new(2, 0, 1)));
        let t = classify_component(&triangle_inf()).unwrap();
        assert_eq!((t.kind, t.signature), (Kind::NonAffine, Signature::new(2, 1, 0)));
        assert_eq!(t.name, NamedType::UNNAMED);
    }

    #[test]
    fn product_verdicts() {
        let m = CoxeterMatrix::disjoint_union(&[triangle_inf(), named(Family::ATilde, 2), named(Family::A, 2)]);
        let rep = classify(&m).unwrap();
        assert_eq!(rep.components.len(), 3);
        let radical: Vec<_> = rep.amenable_radical_factors.iter().map(|c| c.name.to_string()).collect();
        assert_eq!(radical, vec!["Ã_2", "A_2"]);
        assert_eq!(rep.amenable_radical_factors[0].vertices, vec![3, 4, 5]);
        assert!(!rep.cstar.simple && !rep.cstar.unique_trace);
        assert!(!rep.primitive.primitive);
    }

    #[test]
    fn non_affine_verdicts() {
        let rep = classify(&triangle_inf()).unwrap();
        assert!(rep.amenable_radical_factors.is_empty());
        assert!(rep.cstar.simple && rep.cstar.unique_trace);
        assert!(rep.primitive.primitive);
    }

    #[test]
    fn single_a1_is_its_own_radical() {
        let rep = classify(&CoxeterMatrix::from_edges(1, &[])).unwrap();
        assert_eq!(rep.amenable_radical_factors.len(), 1);
        assert_eq!(rep.amenable_radical_factors[0].name.to_string(), "A_1");
        assert!(!rep.cstar.simple);
    }

    #[test]
    fn two_non_affine_factors_are_not_primitive() {
        let m = CoxeterMatrix::disjoint_union(&[triangle_inf(), triangle_inf()]);
        let rep = classify(&m).unwrap();
        assert!(rep.cstar.simple);
        assert!(!rep.primitive.primitive);
        assert!(rep.primitive.reason.starts_with("reducible"));
    }

    #[test]
    fn finite_primitivity_table() {
        let check = |m: CoxeterMatrix| classify(&m).unwrap().primitive.primitive;
        assert!(check(named(Family::A, 4)));
        assert!(check(named(Family::D, 5)));
        assert!(!check(named(Family::D, 4)));
        assert!(check(named(Family::E, 6)));
        assert!(!check(named(Family::E, 7)));
        assert!(!check(named(Family::B, 3)));
        assert!(!check(named(Family::F, 4)));
        assert!(!check(named(Family::H, 3)));
        let dihedral = |l| CoxeterMatrix::from_edges(2, &[(0, 1, F(l))]);
        assert!(check(dihedral(3)));
        assert!(check(dihedral(7)));
        assert!(!check(dihedral(9)));
        assert!(!check(dihedral(6)));
        assert!(!check(named(Family::ATilde, 2)));
    }

    #[test]
    fn unnamed_spherical_is_an_error() {
        let c = ComponentClass {
            vertices: vec![0, 1, 2],
            kind: Kind::Spherical,
            name: NamedType::UNNAMED,
            signature: Signature::new(3, 0, 0),
        };
        assert_eq!(primitivity(&[c]), Err(ClassifyError::UnnamedSpherical(vec![0, 1, 2])));
    }

    #[test]
    fn kind_is_permutation_invariant() {
        let m = CoxeterMatrix::from_edges(4, &[(0, 1, Inf), (1, 2, F(3)), (2, 3, F(5))]);
        let base = classify_component(&m).unwrap();
        for perm in [[3, 2, 1, 0], [1, 3, 0, 2], [2, 0, 3, 1]] {
            let c = classify_component(&m.permuted(&perm)).unwrap();
            assert_eq!((c.kind, c.signature), (base.kind, base.signature));
        }
    }
}
