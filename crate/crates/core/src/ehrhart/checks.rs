//! Product identities for h*-polynomials under matroid operations.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matroid::Matroid;
use crate::poly::IntPolynomial;

use super::{ehrhart_data, sep_of};

/// Both sides of a polynomial identity.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    #[serde(serialize_with = "crate::io::ser_poly")]
    pub lhs: IntPolynomial,
    #[serde(serialize_with = "crate::io::ser_poly")]
    pub rhs: IntPolynomial,
    pub holds: bool,
}

impl IdentityCheck {
    fn new(name: &'static str, lhs: IntPolynomial, rhs: IntPolynomial) -> Self {
        let holds = lhs == rhs;
        IdentityCheck {
            name,
            lhs,
            rhs,
            holds,
        }
    }
}

/// h* of `Σ(M)` by lattice-point counting.
pub fn brute_force_hstar(m: &Matroid, box_cap: u128) -> Result<IntPolynomial> {
    Ok(ehrhart_data(&sep_of(m)?, box_cap)?.hstar)
}

/// `h*(Σ(M1 ⊕ M2)) = h*(Σ(M1)) · h*(Σ(M2))`.
pub fn check_free_sum<F>(m1: &Matroid, m2: &Matroid, hstar: F) -> Result<IdentityCheck>
where
    F: Fn(&Matroid) -> Result<IntPolynomial>,
{
    let (sum, _) = m1.direct_sum(m2)?;
    Ok(IdentityCheck::new(
        "free_sum",
        hstar(&sum)?,
        &hstar(m1)? * &hstar(m2)?,
    ))
}

/// `h*(Σ(M)) = (1 + t) h*(Σ(M/e))` for bipartite `M`.
pub fn check_contraction<F>(m: &Matroid, e: usize, hstar: F) -> Result<IdentityCheck>
where
    F: Fn(&Matroid) -> Result<IntPolynomial>,
{
    if !m.is_bipartite() {
        return Err(Error::Precondition(
            "contraction identity needs a bipartite matroid".into(),
        ));
    }
    let con = m.minor(0, 1 << e)?;
    let rhs = &IntPolynomial::one_plus_t_pow(1) * &hstar(&con)?;
    Ok(IdentityCheck::new("contraction", hstar(m)?, rhs))
}

/// `(1 + t) h*(Σ(P(M1, M2))) = h*(Σ(M1)) · h*(Σ(M2))` for bipartite `M1`.
pub fn check_parallel_connection<F>(
    m1: &Matroid,
    m2: &Matroid,
    p: &str,
    hstar: F,
) -> Result<IdentityCheck>
where
    F: Fn(&Matroid) -> Result<IntPolynomial>,
{
    if !m1.is_bipartite() {
        return Err(Error::Precondition(
            "parallel connection identity needs the first matroid bipartite".into(),
        ));
    }
    let (pc, _) = Matroid::parallel_connection(m1, m2, p)?;
    let lhs = &IntPolynomial::one_plus_t_pow(1) * &hstar(&pc)?;
    Ok(IdentityCheck::new(
        "parallel_connection",
        lhs,
        &hstar(m1)? * &hstar(m2)?,
    ))
}
