//! Vector norms, induced operator norms of linear maps, operator norms of
//! bilinear maps, and distances between multiplications.
//!
//! The ℓ¹ context is the workhorse: there the bilinear operator norm is
//! exactly computable (the unit ball is the absolutely convex hull of the
//! basis, so the sup over unit pairs is attained at a basis pair). For ℓ² and
//! ℓ∞ the bilinear norm is only bracketed between a Monte-Carlo lower bound
//! and an upper bound through norm-equivalence constants, and every consumer
//! of a non-exact norm must refuse to assert violations.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{Element, LinearMap, Multiplication, StructureTensor};
use crate::error::{Error, Result};

/// Which ℓ^p norm the ambient space carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NormKind {
    #[serde(rename = "l1")]
    L1,
    #[serde(rename = "l2")]
    L2,
    #[serde(rename = "linf")]
    Linf,
}

impl std::fmt::Display for NormKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NormKind::L1 => write!(f, "l1"),
            NormKind::L2 => write!(f, "l2"),
            NormKind::Linf => write!(f, "linf"),
        }
    }
}

impl std::str::FromStr for NormKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "l1" => Ok(NormKind::L1),
            "l2" => Ok(NormKind::L2),
            "linf" => Ok(NormKind::Linf),
            other => Err(Error::InvalidParameter(format!("unknown norm {other:?}, expected l1|l2|linf"))),
        }
    }
}

/// Norm choice plus the Monte-Carlo sampling policy used for the non-exact
/// bilinear norms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormContext {
    kind: NormKind,
    mc_samples: usize,
    mc_seed: u64,
}

impl NormContext {
    pub fn new(kind: NormKind) -> Self {
        Self { kind, mc_samples: 10_000, mc_seed: 0x5EED_CAB1E5 }
    }

    pub fn l1() -> Self {
        Self::new(NormKind::L1)
    }

    pub fn l2() -> Self {
        Self::new(NormKind::L2)
    }

    pub fn linf() -> Self {
        Self::new(NormKind::Linf)
    }

    pub fn with_samples(mut self, samples: usize, seed: u64) -> Self {
        self.mc_samples = samples;
        self.mc_seed = seed;
        self
    }

    pub fn kind(&self) -> NormKind {
        self.kind
    }

    /// Bilinear operator norms are exact only in the ℓ¹ context.
    pub fn bilinear_exact(&self) -> bool {
        matches!(self.kind, NormKind::L1)
    }

    /// Induced norms of linear maps are exact for all three kinds.
    pub fn linear_exact(&self) -> bool {
        true
    }
}

impl Default for NormContext {
    fn default() -> Self {
        Self::l1()
    }
}

/// The ℓ^p norm of an element's coordinates.
pub fn vector_norm(x: &Element, ctx: &NormContext) -> f64 {
    match ctx.kind {
        NormKind::L1 => x.coords().iter().map(|c| c.norm()).sum(),
        NormKind::L2 => x.coords().iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt(),
        NormKind::Linf => x.coords().iter().map(|c| c.norm()).fold(0.0, f64::max),
    }
}

/// Exact induced operator norm: max absolute column sum (ℓ¹), largest
/// singular value (ℓ²), max absolute row sum (ℓ∞).
pub fn linear_opnorm(m: &LinearMap, ctx: &NormContext) -> f64 {
    let a = m.matrix();
    match ctx.kind {
        NormKind::L1 => (0..a.ncols())
            .map(|j| a.column(j).iter().map(|c| c.norm()).sum::<f64>())
            .fold(0.0, f64::max),
        NormKind::L2 => {
            if a.iter().all(|c| c.norm() == 0.0) {
                0.0
            } else {
                nalgebra::linalg::SVD::try_new(a.clone(), false, false, f64::EPSILON, 100_000)
                    .map(|svd| svd.singular_values.iter().copied().fold(0.0, f64::max))
                    .unwrap_or(f64::NAN)
            }
        }
        NormKind::Linf => (0..a.nrows())
            .map(|i| a.row(i).iter().map(|c| c.norm()).sum::<f64>())
            .fold(0.0, f64::max),
    }
}

/// Result of a bilinear operator norm computation.
///
/// `value` is the number used as `|⋆|` in bounds; when `exact` it equals the
/// norm, otherwise it is an upper bound and `lower` a sampled lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BilinearNorm {
    pub value: f64,
    pub lower: f64,
    pub exact: bool,
}

impl BilinearNorm {
    fn exact(value: f64) -> Self {
        Self { value, lower: value, exact: true }
    }
}

/// ℓ¹ norm of the slice `α_i ⋆ α_j` of a tensor.
fn basis_pair_l1(t: &StructureTensor, i: usize, j: usize) -> f64 {
    (0..t.dim()).map(|k| t.entry(i, j, k).norm()).sum()
}

/// Operator norm of the bilinear map given by a structure tensor.
///
/// ℓ¹: exactly `max_{i,j} ‖α_i ⋆ α_j‖₁`. ℓ² and ℓ∞: upper bound via the
/// norm-equivalence constants against ℓ¹ plus a seeded Monte-Carlo lower
/// bound over random unit pairs, flagged non-exact.
pub fn bilinear_opnorm(t: &StructureTensor, ctx: &NormContext) -> BilinearNorm {
    let n = t.dim();
    let l1_value = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| basis_pair_l1(t, i, j))
        .fold(0.0, f64::max);
    match ctx.kind {
        NormKind::L1 => BilinearNorm::exact(l1_value),
        NormKind::L2 | NormKind::Linf => {
            // ‖v‖₂ ≤ ‖v‖₁ ≤ √n ‖v‖₂ and ‖v‖_∞ ≤ ‖v‖₁ ≤ n ‖v‖_∞
            let factor = match ctx.kind {
                NormKind::L2 => n as f64,
                NormKind::Linf => (n as f64) * (n as f64),
                NormKind::L1 => unreachable!(),
            };
            let upper = factor * l1_value;
            let mut rng = ChaCha8Rng::seed_from_u64(ctx.mc_seed);
            let mut lower = 0.0f64;
            // cheap bilinear evaluation without validation
            for _ in 0..ctx.mc_samples {
                let x = random_unit_vector(n, ctx, &mut rng);
                let y = random_unit_vector(n, ctx, &mut rng);
                let mut out = DVector::from_element(n, Complex64::new(0.0, 0.0));
                for i in 0..n {
                    for j in 0..n {
                        let c = x[i] * y[j];
                        for k in 0..n {
                            out[k] += c * t.entry(i, j, k);
                        }
                    }
                }
                let norm = vector_norm(&Element::from_vector(out), ctx);
                lower = lower.max(norm);
            }
            BilinearNorm { value: upper, lower, exact: false }
        }
    }
}

/// A random vector of unit ℓ^p norm (complex Gaussian direction).
pub fn random_unit_vector(n: usize, ctx: &NormContext, rng: &mut impl Rng) -> DVector<Complex64> {
    loop {
        let v = DVector::from_fn(n, |_, _| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let norm = vector_norm(&Element::from_vector(v.clone()), ctx);
        if norm > 1e-6 {
            return v / Complex64::new(norm, 0.0);
        }
    }
}

/// Distance `|⋄ − ⋆|`: the bilinear operator norm of the entrywise tensor
/// difference. Exactness follows the context.
pub fn mult_distance(m1: &Multiplication, m2: &Multiplication) -> Result<BilinearNorm> {
    if m1.dim() != m2.dim() {
        return Err(Error::DimensionMismatch {
            context: "multiplication distance",
            expected: m1.dim(),
            got: m2.dim(),
        });
    }
    if m1.ctx() != m2.ctx() {
        return Err(Error::NormContextMismatch("distance requires equal norm contexts"));
    }
    Ok(bilinear_opnorm(&m1.tensor().sub(m2.tensor())?, m1.ctx()))
}

/// Checks the two-sided estimate
/// `‖x‖·‖e‖⁻¹ ≤ |𝔩_x|, |𝔯_x| ≤ |⋆|·‖x‖` with `1e-9` relative slack.
///
/// Requires a unital multiplication; the unit is located by `find_unit`.
pub fn mult_norm_sandwich_check(m: &Multiplication, x: &Element, unit_tol: f64) -> Result<bool> {
    let e = m
        .find_unit(unit_tol)
        .ok_or(Error::NotUnital { tol: unit_tol })?;
    let ctx = m.ctx();
    let x_norm = vector_norm(x, ctx);
    let e_norm = vector_norm(&e, ctx);
    let left = linear_opnorm(&m.left_mult_matrix(x)?, ctx);
    let right = linear_opnorm(&m.right_mult_matrix(x)?, ctx);
    let slack = crate::tolerances::BOUND_REL_SLACK;
    let lo = x_norm / e_norm;
    let hi = m.opnorm_value() * x_norm;
    let lower_ok = lo <= left * (1.0 + slack) + slack && lo <= right * (1.0 + slack) + slack;
    let upper_ok = left <= hi * (1.0 + slack) + slack && right <= hi * (1.0 + slack) + slack;
    Ok(lower_ok && upper_ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{self, Element};
    use approx::assert_abs_diff_eq;
    use nalgebra::DMatrix;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn vector_norms_of_three_four() {
        let x = Element::from_reals(&[3.0, 4.0]);
        assert_eq!(vector_norm(&x, &NormContext::l1()), 7.0);
        assert_eq!(vector_norm(&x, &NormContext::l2()), 5.0);
        assert_eq!(vector_norm(&x, &NormContext::linf()), 4.0);
    }

    #[test]
    fn linear_opnorm_identity_is_one() {
        let id = LinearMap::identity(3);
        for ctx in [NormContext::l1(), NormContext::l2(), NormContext::linf()] {
            assert_abs_diff_eq!(linear_opnorm(&id, &ctx), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn linear_opnorm_diagonal_l1() {
        let m = LinearMap::new(DMatrix::from_row_slice(
            2,
            2,
            &[c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(5.0, 0.0)],
        ))
        .unwrap();
        assert_eq!(linear_opnorm(&m, &NormContext::l1()), 5.0);
    }

    #[test]
    fn linear_opnorm_nilpotent_l1_and_sampling_never_exceeds_it() {
        let m = LinearMap::new(DMatrix::from_row_slice(
            2,
            2,
            &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        ))
        .unwrap();
        let ctx = NormContext::l1();
        let norm = linear_opnorm(&m, &ctx);
        assert_eq!(norm, 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut best = 0.0f64;
        for _ in 0..10_000 {
            let x = random_unit_vector(2, &ctx, &mut rng);
            let image = Element::from_vector(m.matrix() * x);
            let v = vector_norm(&image, &ctx);
            assert!(v <= norm * (1.0 + 1e-9));
            best = best.max(v);
        }
        // the column-sum formula attains the sampled sup
        assert!(best > norm - 1e-2);
    }

    #[test]
    fn bilinear_opnorm_pointwise_is_one_and_dominates_samples() {
        for n in [1usize, 2, 3] {
            let m = algebra::pointwise(n, NormContext::l1());
            let op = bilinear_opnorm(m.tensor(), m.ctx());
            assert!(op.exact);
            assert_eq!(op.value, 1.0);
            let ctx = NormContext::l1();
            let mut rng = ChaCha8Rng::seed_from_u64(17);
            for _ in 0..2_000 {
                let x = Element::from_vector(random_unit_vector(n, &ctx, &mut rng));
                let y = Element::from_vector(random_unit_vector(n, &ctx, &mut rng));
                let v = vector_norm(&m.multiply(&x, &y).unwrap(), &ctx);
                assert!(v <= op.value * (1.0 + 1e-9));
            }
        }
    }

    #[test]
    fn bilinear_opnorm_zero_and_scaled_scalar() {
        let z = algebra::zero_multiplication(3, NormContext::l1());
        assert_eq!(z.opnorm_value(), 0.0);
        let doubled = algebra::pointwise(1, NormContext::l1()).tensor().scale(c(2.0, 0.0));
        assert_eq!(bilinear_opnorm(&doubled, &NormContext::l1()).value, 2.0);
    }

    #[test]
    fn non_l1_bilinear_norms_bracket_and_flag() {
        let m = algebra::pointwise(2, NormContext::l2().with_samples(2_000, 1));
        let op = m.opnorm();
        assert!(!op.exact);
        // pointwise on ℂ² has true ℓ²-bilinear norm 1
        assert!(op.lower <= 1.0 + 1e-9);
        assert!(op.lower > 0.8);
        assert!(op.value >= 1.0);
    }

    #[test]
    fn mult_distance_examples() {
        let ctx = NormContext::l1();
        let pw = algebra::pointwise(2, ctx.clone());
        assert_eq!(mult_distance(&pw, &pw).unwrap().value, 0.0);
        let zero = algebra::zero_multiplication(2, ctx.clone());
        assert_eq!(mult_distance(&pw, &zero).unwrap().value, 1.0);
        let usual = algebra::pointwise(1, ctx.clone());
        let doubled = crate::algebra::Multiplication::new(
            usual.tensor().scale(c(2.0, 0.0)),
            ctx.clone(),
            1e-9,
        )
        .unwrap();
        assert_eq!(mult_distance(&usual, &doubled).unwrap().value, 1.0);
    }

    #[test]
    fn sandwich_check_pointwise_example() {
        let m = algebra::pointwise(2, NormContext::l1());
        // ‖x‖/‖e‖ = 7/2 ≤ |𝔩| = 5 ≤ |⋆|‖x‖ = 7
        let x = Element::from_reals(&[2.0, 5.0]);
        assert!(mult_norm_sandwich_check(&m, &x, 1e-9).unwrap());
        // x = e: 1 ≤ |𝔩_e| = 1 ≤ |⋆|‖e‖
        let e = m.find_unit(1e-9).unwrap();
        assert!(mult_norm_sandwich_check(&m, &e, 1e-9).unwrap());
    }

    #[test]
    fn sandwich_check_randomized() {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for trial in 0..500 {
            let size = 1 + (trial % 2);
            let m = algebra::convolution_algebra(
                size,
                &(0..size).map(|_| rng.gen_range(0.5..2.0)).collect::<Vec<_>>(),
                NormContext::l1(),
            )
            .unwrap();
            let x = Element::from_vector(random_unit_vector(m.dim(), m.ctx(), &mut rng));
            assert!(mult_norm_sandwich_check(&m, &x, 1e-9).unwrap());
        }
    }
}
