//! Structure constants, elements, and validated multiplications on
//! finite-dimensional complex coordinate spaces.
//!
//! A bilinear operation on the coordinate space of dimension `n` is stored as
//! the dense tensor of its `n³` structure constants: the product of the `i`-th
//! and `j`-th standard basis vectors has `k`-th coordinate `lambda(i, j, k)`.
//! [`Multiplication`] is a tensor that passed the associativity check together
//! with its cached bilinear operator norm.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::norms::{self, BilinearNorm, NormContext};
use crate::tolerances;

/// Dense `n³` array of structure constants, stored i-major, then j, then k.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureTensor {
    dim: usize,
    entries: Vec<Complex64>,
}

impl StructureTensor {
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        if entries.len() != dim * dim * dim {
            return Err(Error::DimensionMismatch {
                context: "structure tensor entries",
                expected: dim * dim * dim,
                got: entries.len(),
            });
        }
        if entries.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite("structure tensor"));
        }
        Ok(Self { dim, entries })
    }

    pub fn zeros(dim: usize) -> Self {
        Self { dim, entries: vec![Complex64::new(0.0, 0.0); dim * dim * dim] }
    }

    /// Builds the tensor from a function of 0-based indices `(i, j, k)`.
    pub fn from_fn<F: FnMut(usize, usize, usize) -> Complex64>(dim: usize, mut f: F) -> Result<Self> {
        let mut entries = Vec::with_capacity(dim * dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    entries.push(f(i, j, k));
                }
            }
        }
        Self::new(dim, entries)
    }

    #[inline]
    fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dim + j) * self.dim + k
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize, k: usize) -> Complex64 {
        self.entries[self.idx(i, j, k)]
    }

    pub fn set_entry(&mut self, i: usize, j: usize, k: usize, value: Complex64) {
        let idx = self.idx(i, j, k);
        self.entries[idx] = value;
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Entrywise difference; the operand dimensions must match.
    pub fn sub(&self, other: &StructureTensor) -> Result<StructureTensor> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                context: "tensor difference",
                expected: self.dim,
                got: other.dim,
            });
        }
        let entries = self
            .entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| a - b)
            .collect();
        Ok(StructureTensor { dim: self.dim, entries })
    }

    pub fn scale(&self, c: Complex64) -> StructureTensor {
        StructureTensor {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e * c).collect(),
        }
    }
}

/// A coordinate vector in the ambient space.
#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    coords: DVector<Complex64>,
}

impl Element {
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        if coords.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite("element coordinates"));
        }
        Ok(Self { coords: DVector::from_vec(coords) })
    }

    pub fn from_vector(coords: DVector<Complex64>) -> Self {
        Self { coords }
    }

    pub fn from_reals(coords: &[f64]) -> Self {
        Self {
            coords: DVector::from_iterator(
                coords.len(),
                coords.iter().map(|&x| Complex64::new(x, 0.0)),
            ),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { coords: DVector::from_element(dim, Complex64::new(0.0, 0.0)) }
    }

    /// The `i`-th standard basis vector (0-based).
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut coords = DVector::from_element(dim, Complex64::new(0.0, 0.0));
        coords[i] = Complex64::new(1.0, 0.0);
        Self { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &DVector<Complex64> {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> Complex64 {
        self.coords[i]
    }

    pub fn add(&self, other: &Element) -> Element {
        Element { coords: &self.coords + &other.coords }
    }

    pub fn sub(&self, other: &Element) -> Element {
        Element { coords: &self.coords - &other.coords }
    }

    pub fn scale(&self, c: Complex64) -> Element {
        Element { coords: &self.coords * c }
    }
}

/// A linear operator on the ambient space, stored as a dense square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap {
    matrix: DMatrix<Complex64>,
}

impl LinearMap {
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                context: "linear map",
                expected: matrix.nrows(),
                got: matrix.ncols(),
            });
        }
        if matrix.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite("linear map"));
        }
        Ok(Self { matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Self { matrix: DMatrix::identity(dim, dim) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn apply(&self, x: &Element) -> Result<Element> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                context: "linear map application",
                expected: self.dim(),
                got: x.dim(),
            });
        }
        Ok(Element::from_vector(&self.matrix * x.coords()))
    }

    /// `self ∘ other`: applies `other` first.
    pub fn compose(&self, other: &LinearMap) -> Result<LinearMap> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                context: "linear map composition",
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(LinearMap { matrix: &self.matrix * &other.matrix })
    }
}

/// Finite semigroup given by its multiplication table.
///
/// `table[i][j]` is the 0-based index of the product of elements `i` and `j`;
/// associativity is checked exhaustively at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SemigroupTable {
    size: usize,
    table: Vec<usize>,
}

impl SemigroupTable {
    pub fn new(size: usize, table: Vec<usize>) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidParameter("semigroup size must be positive".into()));
        }
        if table.len() != size * size {
            return Err(Error::DimensionMismatch {
                context: "semigroup table",
                expected: size * size,
                got: table.len(),
            });
        }
        for i in 0..size {
            for j in 0..size {
                let v = table[i * size + j];
                if v >= size {
                    return Err(Error::TableEntryOutOfRange { i: i + 1, j: j + 1, got: v + 1, size });
                }
            }
        }
        let s = Self { size, table };
        for i in 0..size {
            for j in 0..size {
                for k in 0..size {
                    let lhs = s.product(s.product(i, j), k);
                    let rhs = s.product(i, s.product(j, k));
                    if lhs != rhs {
                        return Err(Error::TableNotAssociative {
                            i: i + 1,
                            j: j + 1,
                            k: k + 1,
                            lhs: lhs + 1,
                            rhs: rhs + 1,
                        });
                    }
                }
            }
        }
        Ok(s)
    }

    #[inline]
    pub fn product(&self, i: usize, j: usize) -> usize {
        self.table[i * self.size + j]
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Cyclic group Z/n: `i ∘ j = (i + j) mod n`, unit 0.
    pub fn cyclic(n: usize) -> Self {
        let table = (0..n * n).map(|t| (t / n + t % n) % n).collect();
        Self { size: n, table }
    }

    /// Left-zero semigroup: `i ∘ j = i`. No unit for n > 1.
    pub fn left_zero(n: usize) -> Self {
        let table = (0..n * n).map(|t| t / n).collect();
        Self { size: n, table }
    }

    /// Truncated addition monoid: `i ∘ j = min(i + j, n − 1)`, unit 0.
    pub fn truncated_add(n: usize) -> Self {
        let table = (0..n * n).map(|t| (t / n + t % n).min(n - 1)).collect();
        Self { size: n, table }
    }

    /// Join semilattice on a chain: `i ∘ j = max(i, j)`, unit 0.
    pub fn max_join(n: usize) -> Self {
        let table = (0..n * n).map(|t| (t / n).max(t % n)).collect();
        Self { size: n, table }
    }

    /// Relabels elements by a permutation: `perm[i]` is the new name of `i`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.size {
            return Err(Error::DimensionMismatch {
                context: "relabeling permutation",
                expected: self.size,
                got: perm.len(),
            });
        }
        let mut inv = vec![usize::MAX; self.size];
        for (i, &p) in perm.iter().enumerate() {
            if p >= self.size || inv[p] != usize::MAX {
                return Err(Error::InvalidParameter("not a permutation".into()));
            }
            inv[p] = i;
        }
        let mut table = vec![0; self.size * self.size];
        for i in 0..self.size {
            for j in 0..self.size {
                table[i * self.size + j] = perm[self.product(inv[i], inv[j])];
            }
        }
        Ok(Self { size: self.size, table })
    }
}

/// Computes the associativity defect: the maximum over all index 4-tuples
/// `(i, j, k, p)` of the quadratic residual
/// `|Σ_ℓ λ(i,j,ℓ)·λ(ℓ,k,p) − Σ_q λ(i,q,p)·λ(j,k,q)|`.
///
/// The tensor lies on the associativity variety exactly when this vanishes.
pub fn associativity_defect(tensor: &StructureTensor) -> f64 {
    worst_associativity_violation(tensor).0
}

/// Like [`associativity_defect`] but also reports the 0-based argmax tuple.
pub fn worst_associativity_violation(tensor: &StructureTensor) -> (f64, (usize, usize, usize, usize)) {
    let n = tensor.dim;
    let mut worst = 0.0f64;
    let mut at = (0, 0, 0, 0);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for p in 0..n {
                    let mut s1 = Complex64::new(0.0, 0.0);
                    for l in 0..n {
                        s1 += tensor.entry(i, j, l) * tensor.entry(l, k, p);
                    }
                    let mut s2 = Complex64::new(0.0, 0.0);
                    for q in 0..n {
                        s2 += tensor.entry(i, q, p) * tensor.entry(j, k, q);
                    }
                    let r = (s1 - s2).norm();
                    if r > worst {
                        worst = r;
                        at = (i, j, k, p);
                    }
                }
            }
        }
    }
    (worst, at)
}

/// A structure tensor that passed the associativity check, together with its
/// norm context, cached bilinear operator norm, and the measured defect.
#[derive(Debug, Clone)]
pub struct Multiplication {
    tensor: StructureTensor,
    ctx: NormContext,
    opnorm: BilinearNorm,
    assoc_defect: f64,
}

impl Multiplication {
    /// Validates the tensor against the associativity variety at tolerance
    /// `tol` and caches the operator norm. Rejection names the worst
    /// quadratic residual.
    pub fn new(tensor: StructureTensor, ctx: NormContext, tol: f64) -> Result<Self> {
        let (defect, (i, j, k, p)) = worst_associativity_violation(&tensor);
        if defect > tol {
            return Err(Error::NotAssociative {
                defect,
                tol,
                i: i + 1,
                j: j + 1,
                k: k + 1,
                p: p + 1,
            });
        }
        let opnorm = norms::bilinear_opnorm(&tensor, &ctx);
        Ok(Self { tensor, ctx, opnorm, assoc_defect: defect })
    }

    /// Validates at the default tolerance `1e-9·(1 + max|λ|)²`.
    pub fn with_default_tol(tensor: StructureTensor, ctx: NormContext) -> Result<Self> {
        let tol = tolerances::default_assoc_tol(tensor.max_abs());
        Self::new(tensor, ctx, tol)
    }

    pub fn dim(&self) -> usize {
        self.tensor.dim()
    }

    pub fn tensor(&self) -> &StructureTensor {
        &self.tensor
    }

    pub fn ctx(&self) -> &NormContext {
        &self.ctx
    }

    pub fn opnorm(&self) -> &BilinearNorm {
        &self.opnorm
    }

    /// The scalar used as `|⋆|` in every bound; exact for the ℓ¹ context,
    /// an upper bound otherwise.
    pub fn opnorm_value(&self) -> f64 {
        self.opnorm.value
    }

    pub fn assoc_defect(&self) -> f64 {
        self.assoc_defect
    }

    /// Bilinear extension of the structure constants.
    pub fn multiply(&self, x: &Element, y: &Element) -> Result<Element> {
        let n = self.dim();
        if x.dim() != n {
            return Err(Error::DimensionMismatch { context: "multiply lhs", expected: n, got: x.dim() });
        }
        if y.dim() != n {
            return Err(Error::DimensionMismatch { context: "multiply rhs", expected: n, got: y.dim() });
        }
        let mut out = DVector::from_element(n, Complex64::new(0.0, 0.0));
        for i in 0..n {
            let xi = x.coord(i);
            if xi == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                let c = xi * y.coord(j);
                if c == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for k in 0..n {
                    out[k] += c * self.tensor.entry(i, j, k);
                }
            }
        }
        Ok(Element::from_vector(out))
    }

    /// Matrix of `y ↦ x ⋆ y`.
    pub fn left_mult_matrix(&self, x: &Element) -> Result<LinearMap> {
        let n = self.dim();
        if x.dim() != n {
            return Err(Error::DimensionMismatch { context: "left multiplication", expected: n, got: x.dim() });
        }
        let mut m = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
        for i in 0..n {
            let xi = x.coord(i);
            if xi == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                for k in 0..n {
                    m[(k, j)] += xi * self.tensor.entry(i, j, k);
                }
            }
        }
        Ok(LinearMap { matrix: m })
    }

    /// Matrix of `y ↦ y ⋆ x`.
    pub fn right_mult_matrix(&self, x: &Element) -> Result<LinearMap> {
        let n = self.dim();
        if x.dim() != n {
            return Err(Error::DimensionMismatch { context: "right multiplication", expected: n, got: x.dim() });
        }
        let mut m = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
        for j in 0..n {
            let xj = x.coord(j);
            if xj == Complex64::new(0.0, 0.0) {
                continue;
            }
            for i in 0..n {
                for k in 0..n {
                    m[(k, i)] += xj * self.tensor.entry(i, j, k);
                }
            }
        }
        Ok(LinearMap { matrix: m })
    }

    /// Solves the stacked least-squares system `e ⋆ α_j = α_j`, `α_i ⋆ e = α_i`
    /// over all basis vectors and returns the solution when its worst basis
    /// residual (in the context norm) is at most `tol`.
    pub fn find_unit(&self, tol: f64) -> Option<Element> {
        let n = self.dim();
        let rows = 2 * n * n;
        let mut a = DMatrix::from_element(rows, n, Complex64::new(0.0, 0.0));
        let mut b = DVector::from_element(rows, Complex64::new(0.0, 0.0));
        // e ⋆ α_j = α_j: Σ_i λ(i,j,k) e_i = δ_jk
        for j in 0..n {
            for k in 0..n {
                let row = j * n + k;
                for i in 0..n {
                    a[(row, i)] = self.tensor.entry(i, j, k);
                }
                if j == k {
                    b[row] = Complex64::new(1.0, 0.0);
                }
            }
        }
        // α_i ⋆ e = α_i: Σ_j λ(i,j,k) e_j = δ_ik
        for i in 0..n {
            for k in 0..n {
                let row = n * n + i * n + k;
                for j in 0..n {
                    a[(row, j)] = self.tensor.entry(i, j, k);
                }
                if i == k {
                    b[row] = Complex64::new(1.0, 0.0);
                }
            }
        }
        let svd = nalgebra::linalg::SVD::try_new(a, true, true, f64::EPSILON, 100_000)?;
        let e = Element::from_vector(svd.solve(&b, 1e-13).ok()?);
        let residual = self.unit_residual(&e);
        if residual.is_finite() && residual <= tol {
            Some(e)
        } else {
            None
        }
    }

    /// Worst basis residual `max_i max(‖e⋆α_i − α_i‖, ‖α_i⋆e − α_i‖)`.
    pub fn unit_residual(&self, e: &Element) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            let alpha = Element::basis(n, i);
            let left = self.multiply(e, &alpha).expect("dims agree").sub(&alpha);
            let right = self.multiply(&alpha, e).expect("dims agree").sub(&alpha);
            worst = worst
                .max(norms::vector_norm(&left, &self.ctx))
                .max(norms::vector_norm(&right, &self.ctx));
        }
        worst
    }

    /// True when `max_{i,j} ‖α_i⋆α_j − α_j⋆α_i‖ ≤ tol`.
    pub fn is_commutative(&self, tol: f64) -> bool {
        let n = self.dim();
        for i in 0..n {
            for j in 0..i {
                let mut norm = 0.0;
                for k in 0..n {
                    let d = self.tensor.entry(i, j, k) - self.tensor.entry(j, i, k);
                    match self.ctx.kind() {
                        crate::norms::NormKind::L1 => norm += d.norm(),
                        crate::norms::NormKind::L2 => norm += d.norm_sqr(),
                        crate::norms::NormKind::Linf => norm = norm.max(d.norm()),
                    }
                }
                if matches!(self.ctx.kind(), crate::norms::NormKind::L2) {
                    norm = norm.sqrt();
                }
                if norm > tol {
                    return false;
                }
            }
        }
        true
    }
}

/// The algebra of a finite semigroup: `α_i ⋆ α_j = α_{table(i,j)}`.
pub fn semigroup_algebra(table: &SemigroupTable, ctx: NormContext) -> Multiplication {
    let n = table.size();
    let tensor = StructureTensor::from_fn(n, |i, j, k| {
        if table.product(i, j) == k {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
    .expect("table size is positive");
    // 0/1 entries make every quadratic residual an exact integer; defect is 0.
    Multiplication::new(tensor, ctx, 0.0).expect("semigroup tables produce associative tensors")
}

/// Block direct sum: `(x₁,x₂) ⋆ (x'₁,x'₂) = (x₁⋆₁x'₁, x₂⋆₂x'₂)`.
pub fn direct_sum(m1: &Multiplication, m2: &Multiplication) -> Result<Multiplication> {
    if m1.ctx() != m2.ctx() {
        return Err(Error::NormContextMismatch("direct sum requires equal contexts"));
    }
    let n1 = m1.dim();
    let n = n1 + m2.dim();
    let tensor = StructureTensor::from_fn(n, |i, j, k| {
        if i < n1 && j < n1 && k < n1 {
            m1.tensor().entry(i, j, k)
        } else if i >= n1 && j >= n1 && k >= n1 {
            m2.tensor().entry(i - n1, j - n1, k - n1)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })?;
    // Mixed-block residuals vanish identically; same-block residuals are copies.
    Multiplication::new(tensor, m1.ctx().clone(), m1.assoc_defect().max(m2.assoc_defect()))
}

/// Weighted convolution algebra on functions over `{1..size}²`:
/// `(f ⋆ g)(x, y) = Σ_z f(x, z)·g(z, y)·w_z`. The coordinate space has
/// dimension `size²`, flattened row-major over `(x, y)`.
///
/// With counting weights this is the algebra of `size × size` matrices.
pub fn convolution_algebra(size: usize, weights: &[f64], ctx: NormContext) -> Result<Multiplication> {
    if size == 0 {
        return Err(Error::InvalidParameter("convolution algebra needs positive size".into()));
    }
    if weights.len() != size {
        return Err(Error::DimensionMismatch {
            context: "convolution weights",
            expected: size,
            got: weights.len(),
        });
    }
    for (z, &w) in weights.iter().enumerate() {
        if !(w > 0.0) || !w.is_finite() {
            return Err(Error::NonPositiveWeight { index: z + 1, value: w });
        }
    }
    let n = size * size;
    let mut tensor = StructureTensor::zeros(n);
    for x in 0..size {
        for y in 0..size {
            let a = x * size + y;
            for yp in 0..size {
                let b = y * size + yp; // pairs (y, y') chain with (x, y)
                let c = x * size + yp;
                tensor.set_entry(a, b, c, Complex64::new(weights[y], 0.0));
            }
        }
    }
    // w_y·w_{y'} products agree between the two association orders exactly.
    Multiplication::new(tensor, ctx, 0.0)
}

/// Pointwise (coordinatewise) product on the n-dimensional space.
pub fn pointwise(dim: usize, ctx: NormContext) -> Multiplication {
    let tensor = StructureTensor::from_fn(dim, |i, j, k| {
        if i == j && j == k {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
    .expect("positive dim");
    Multiplication::new(tensor, ctx, 0.0).expect("pointwise product is associative")
}

/// The zero multiplication.
pub fn zero_multiplication(dim: usize, ctx: NormContext) -> Multiplication {
    Multiplication::new(StructureTensor::zeros(dim), ctx, 0.0).expect("zero tensor is associative")
}

/// The algebra of `size × size` complex matrices, realized as the
/// convolution algebra with counting weights.
pub fn matrix_algebra(size: usize, ctx: NormContext) -> Multiplication {
    convolution_algebra(size, &vec![1.0; size], ctx).expect("counting weights are positive")
}

/// Twisted sum of two algebras along a homomorphism `T : B → A`.
///
/// Basis products generated, with `a`-block first and `b`-block second:
///
/// * corrected (`literal = false`): `(a,b)⋆(a',b') = (a a' + a T(b') + T(b) a', b b')`;
/// * literal (`literal = true`): last cross term replaced by `T(b) a`, which
///   kills the `b ⋆ a'`-block contribution and breaks associativity.
///
/// `T` must satisfy `‖T(b ⋆_B b') − T(b) ⋆_A T(b')‖ ≤ hom_tol` on basis pairs.
/// Returns the raw tensor; the caller decides the validation tolerance.
pub fn twisted_sum(
    ma: &Multiplication,
    mb: &Multiplication,
    t: &DMatrix<Complex64>,
    literal: bool,
    hom_tol: f64,
) -> Result<StructureTensor> {
    let na = ma.dim();
    let nb = mb.dim();
    if t.nrows() != na || t.ncols() != nb {
        return Err(Error::DimensionMismatch {
            context: "twist homomorphism shape",
            expected: na * nb,
            got: t.nrows() * t.ncols(),
        });
    }
    let t_col = |j: usize| Element::from_vector(t.column(j).into_owned());
    // homomorphism check on basis pairs
    let mut worst = 0.0f64;
    for i in 0..nb {
        for j in 0..nb {
            let prod_b = mb.multiply(&Element::basis(nb, i), &Element::basis(nb, j))?;
            let mut lhs = Element::zeros(na);
            for k in 0..nb {
                lhs = lhs.add(&t_col(k).scale(prod_b.coord(k)));
            }
            let rhs = ma.multiply(&t_col(i), &t_col(j))?;
            worst = worst.max(norms::vector_norm(&lhs.sub(&rhs), ma.ctx()));
        }
    }
    if worst > hom_tol {
        return Err(Error::NotHomomorphism { residual: worst, tol: hom_tol });
    }

    let n = na + nb;
    let mut tensor = StructureTensor::zeros(n);
    let mut write_a_part = |tensor: &mut StructureTensor, i: usize, j: usize, v: &Element| {
        for k in 0..na {
            let prev = tensor.entry(i, j, k);
            tensor.set_entry(i, j, k, prev + v.coord(k));
        }
    };
    for i in 0..na {
        for j in 0..na {
            let v = ma.multiply(&Element::basis(na, i), &Element::basis(na, j))?;
            write_a_part(&mut tensor, i, j, &v);
        }
    }
    for i in 0..na {
        for j in 0..nb {
            let v = ma.multiply(&Element::basis(na, i), &t_col(j))?;
            write_a_part(&mut tensor, i, na + j, &v);
        }
    }
    if !literal {
        for i in 0..nb {
            for j in 0..na {
                let v = ma.multiply(&t_col(i), &Element::basis(na, j))?;
                write_a_part(&mut tensor, na + i, j, &v);
            }
        }
    }
    for i in 0..nb {
        for j in 0..nb {
            let v = mb.multiply(&Element::basis(nb, i), &Element::basis(nb, j))?;
            for k in 0..nb {
                tensor.set_entry(na + i, na + j, na + k, v.coord(k));
            }
        }
    }
    Ok(tensor)
}
