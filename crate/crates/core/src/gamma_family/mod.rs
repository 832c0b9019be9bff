//! The graphs Γ(n+1): a (2n+1)-cycle `u1 v1 u2 v2 … un vn u(n+1) u1` with
//! chords `u_i u_(i+1)`, together with the closed formulas for the h*- and
//! γ-polynomials and normalized volume of their symmetric edge polytopes.

mod trees;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::matroid::{Graph, Matroid};
use crate::poly::{binom, IntPolynomial, LaurentPolynomial};
use crate::triangulation::VariableOrder;

pub use trees::{
    classify, count_triangulating_trees, summand_audit, triangulating_trees, Anchor, AuditReport,
    BucketCheck, ModifiedEdge, OrientedTree, PairKind, Side, TreeClassification, MAX_TREE_N,
};

/// Γ(n+1) with a fixed edge numbering.
///
/// Vertices: `u_i` is `i - 1` for `i = 1..=n+1`, `v_i` is `n + i` for
/// `i = 1..=n`. Edges: `ẽ = u1 u(n+1)` is edge 0 and the weakest element;
/// triangle `i` contributes the chord `u_i u_(i+1)` (label `c{i}`), then
/// `u_i v_i` (`a{i}`) and `v_i u_(i+1)` (`b{i}`).
#[derive(Clone, Debug)]
pub struct GammaGraph {
    n: usize,
    graph: Graph,
}

impl GammaGraph {
    pub const TILDE: usize = 0;

    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Input("Γ(n+1) needs n >= 1".into()));
        }
        let u = |i: usize| i - 1;
        let v = |i: usize| n + i;
        let mut edges = vec![(u(1), u(n + 1))];
        let mut labels = vec!["et".to_string()];
        for i in 1..=n {
            edges.push((u(i), u(i + 1)));
            edges.push((u(i), v(i)));
            edges.push((v(i), u(i + 1)));
            labels.extend([format!("c{i}"), format!("a{i}"), format!("b{i}")]);
        }
        let graph = Graph::with_labels(2 * n + 1, edges, labels)?.with_distinguished(Self::TILDE)?;
        Ok(GammaGraph { n, graph })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn u(&self, i: usize) -> usize {
        debug_assert!((1..=self.n + 1).contains(&i));
        i - 1
    }

    pub fn v(&self, i: usize) -> usize {
        debug_assert!((1..=self.n).contains(&i));
        self.n + i
    }

    pub fn chord(&self, i: usize) -> usize {
        3 * i - 2
    }

    pub fn a(&self, i: usize) -> usize {
        3 * i - 1
    }

    pub fn b(&self, i: usize) -> usize {
        3 * i
    }

    /// Triangle index `i` of a non-ẽ edge.
    pub fn triangle_of(&self, e: usize) -> Option<usize> {
        (e != Self::TILDE && e <= 3 * self.n).then(|| e.div_ceil(3))
    }

    pub fn matroid(&self) -> Result<Matroid> {
        Matroid::cycle_matroid(&self.graph)
    }

    /// Element order with ẽ weakest, then the remaining edges in order.
    pub fn variable_order(&self) -> VariableOrder {
        VariableOrder::ground(self.graph.edge_count())
    }
}

/// `t^(2ℓ-p-q) Σ_i Σ_j C(p,i) C(q,j) C(2ℓ-p-q, ℓ-q-i+j) t^(2(i+j))`.
pub fn f_pql(p: usize, q: usize, l: usize) -> IntPolynomial {
    assert!(p + q <= 2 * l, "f_pql needs p + q <= 2l");
    let (p, q, l) = (p as i64, q as i64, l as i64);
    let r = 2 * l - p - q;
    let mut coeffs = vec![BigInt::from(0); (2 * l + p + q + 1) as usize];
    for i in 0..=p {
        for j in 0..=q {
            let c = binom(p, i) * binom(q, j) * binom(r, l - q - i + j);
            coeffs[(r + 2 * (i + j)) as usize] += c;
        }
    }
    IntPolynomial::new(coeffs)
}

/// `Σ_{(p,q) ∈ S_2ℓ} C(2ℓ+1, p+q+1) f_{p,q,ℓ}(t)`.
pub fn s_sum(l: usize) -> IntPolynomial {
    let mut acc = IntPolynomial::zero();
    for p in 0..=2 * l {
        for q in 0..=2 * l - p {
            let c = IntPolynomial::new(vec![binom(2 * l as i64 + 1, (p + q + 1) as i64)]);
            acc = &acc + &(&c * &f_pql(p, q, l));
        }
    }
    acc
}

fn one_plus_t_sq() -> LaurentPolynomial {
    LaurentPolynomial::from_int_poly(&IntPolynomial::one_plus_t_pow(2))
}

fn constant(c: BigInt) -> LaurentPolynomial {
    LaurentPolynomial::monomial(c.into(), 0)
}

fn into_polynomial(acc: LaurentPolynomial, what: &str) -> Result<IntPolynomial> {
    acc.to_int_polynomial()
        .ok_or_else(|| Error::Invariant(format!("{what} left negative powers of t")))
}

/// h*(Σ(Γ(n+1)); t) from the closed formula, evaluated over Laurent
/// polynomials so the `(2t)^(-1)` factor at `2ℓ = n` cancels exactly.
pub fn closed_hstar(n: usize) -> Result<IntPolynomial> {
    if n == 0 {
        return Err(Error::Input("closed formulas need n >= 1".into()));
    }
    let ni = n as i64;
    let mut acc = LaurentPolynomial::zero();
    for l in 0..=n / 2 {
        let li = l as i64;
        let two_t = LaurentPolynomial::scaled_t_pow(2, 1);
        let even = &two_t * &constant(binom(ni, 2 * li));
        let odd = &one_plus_t_sq() * &constant(binom(ni, 2 * li + 1));
        let bracket = &even + &odd;
        let term = &(&LaurentPolynomial::scaled_t_pow(2, ni - 2 * li - 1) * &bracket)
            * &LaurentPolynomial::from_int_poly(&s_sum(l));
        acc = &acc + &term;
    }
    into_polynomial(acc, "h* formula")
}

fn central_partial(l: usize) -> IntPolynomial {
    IntPolynomial::new((0..=l as i64).map(|a| binom(2 * a, a)).collect())
}

/// γ(Γ(n+1); t), first displayed form:
/// `Σ_ℓ (2t)^(n-2ℓ-1) (2 C(n,2ℓ) t + C(n,2ℓ+1)) Σ_{a<=ℓ} C(2a,a) t^a`.
pub fn closed_gamma_by_parity(n: usize) -> Result<IntPolynomial> {
    if n == 0 {
        return Err(Error::Input("closed formulas need n >= 1".into()));
    }
    let ni = n as i64;
    let mut acc = LaurentPolynomial::zero();
    for l in 0..=n / 2 {
        let li = l as i64;
        let bracket = IntPolynomial::new(vec![binom(ni, 2 * li + 1), 2 * binom(ni, 2 * li)]);
        let inner = LaurentPolynomial::from_int_poly(&(&bracket * &central_partial(l)));
        acc = &acc + &(&LaurentPolynomial::scaled_t_pow(2, ni - 2 * li - 1) * &inner);
    }
    into_polynomial(acc, "γ formula")
}

/// γ(Γ(n+1); t), second displayed form:
/// `Σ_m C(n,m) (2t)^(n-m) Σ_{a <= m/2} C(2a,a) t^a`.
pub fn closed_gamma_by_size(n: usize) -> Result<IntPolynomial> {
    if n == 0 {
        return Err(Error::Input("closed formulas need n >= 1".into()));
    }
    let ni = n as i64;
    let mut acc = IntPolynomial::zero();
    for m in 0..=n {
        let scale = binom(ni, m as i64) * BigInt::from(2).pow((n - m) as u32);
        let term = IntPolynomial::monomial(scale, n - m);
        acc = &acc + &(&term * &central_partial(m / 2));
    }
    Ok(acc)
}

/// γ(Γ(n+1); t) with both displayed forms evaluated and compared.
pub fn closed_gamma(n: usize) -> Result<IntPolynomial> {
    let a = closed_gamma_by_parity(n)?;
    let b = closed_gamma_by_size(n)?;
    if a != b {
        return Err(Error::Invariant(format!(
            "γ forms disagree at n = {n}: {a} vs {b}"
        )));
    }
    Ok(a)
}

/// `2^n Σ_{k=0}^n (k+1) C(n,k) C(k, ⌊k/2⌋)`.
pub fn closed_volume(n: usize) -> BigInt {
    let ni = n as i64;
    let sum: BigInt = (0..=ni)
        .map(|k| BigInt::from(k + 1) * binom(ni, k) * binom(k, k / 2))
        .sum();
    sum * (BigInt::one() << n)
}
