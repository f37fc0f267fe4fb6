//! Linear maps `Φ: L(C^n) → L(C^m)` in Stinespring and Choi form.
//!
//! A Stinespring pair `(A₀, A₁)` with `A_b: C^n → C^m ⊗ C^k` defines
//! `Φ(X) = Tr_Z(A₀ X A₁*)`; the environment `Z = C^k` is always the second
//! tensor factor. The Choi matrix is `J(Φ) = Σ Φ(E_{i,j}) ⊗ E_{i,j}` on
//! `C^m ⊗ C^n` (output first).

use crate::error::{Error, Result};
use crate::linalg::{
    self, outer, partial_trace, singular_triplets, spectral_norm, swap_factors, swap_row_factors, unvec,
    ComplexMatrix, HermitianMatrix, Keep, C64, ZERO,
};

/// Relative threshold below which singular values of `J` are dropped when factoring.
pub const RANK_THRESHOLD: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct StinespringPair {
    a0: ComplexMatrix,
    a1: ComplexMatrix,
    input_dim: usize,
    output_dim: usize,
    env_dim: usize,
}

impl StinespringPair {
    pub fn new(a0: ComplexMatrix, a1: ComplexMatrix, n: usize, m: usize, k: usize) -> Result<Self> {
        if n == 0 || m == 0 || k == 0 {
            return Err(Error::Shape("Stinespring dimensions must be positive".into()));
        }
        for (name, a) in [("A0", &a0), ("A1", &a1)] {
            if a.shape() != (m * k, n) {
                return Err(Error::Shape(format!(
                    "{name} must be {}x{n} for n={n}, m={m}, k={k}; got {}x{}",
                    m * k,
                    a.rows(),
                    a.cols()
                )));
            }
        }
        Ok(Self { a0, a1, input_dim: n, output_dim: m, env_dim: k })
    }

    /// The identity map on `C^n` (`A₀ = A₁ = 1`, `k = 1`).
    pub fn identity(n: usize) -> Self {
        Self::new(ComplexMatrix::identity(n), ComplexMatrix::identity(n), n, n, 1).expect("valid shapes")
    }

    pub fn a0(&self) -> &ComplexMatrix {
        &self.a0
    }

    pub fn a1(&self) -> &ComplexMatrix {
        &self.a1
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.output_dim
    }

    pub fn env_dim(&self) -> usize {
        self.env_dim
    }

    pub fn scaled(&self, s: C64) -> Self {
        Self { a0: self.a0.scale(s), ..self.clone() }
    }

    /// `Tr_Z(A₀ X A₁*)`.
    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = self.input_dim;
        if x.shape() != (n, n) {
            return Err(Error::Shape(format!("map input must be {n}x{n}, got {}x{}", x.rows(), x.cols())));
        }
        let full = &(&self.a0 * x) * &self.a1.adjoint();
        partial_trace(&full, (self.output_dim, self.env_dim), Keep::First)
    }

    /// `J(Φ) = Σ_{i,j} Φ(E_{i,j}) ⊗ E_{i,j}`.
    pub fn to_choi(&self) -> ChoiMatrix {
        let (n, m, k) = (self.input_dim, self.output_dim, self.env_dim);
        // Φ(E_{ij}) = Σ_z (A₀ e_i)_z (A₁ e_j)_z*, read directly from columns.
        let mut j = ComplexMatrix::zeros(m * n, m * n);
        for i in 0..n {
            for jj in 0..n {
                for y in 0..m {
                    for y2 in 0..m {
                        let mut acc = ZERO;
                        for z in 0..k {
                            acc += self.a0[(y * k + z, i)] * self.a1[(y2 * k + z, jj)].conj();
                        }
                        j[(y * n + i, y2 * n + jj)] = acc;
                    }
                }
            }
        }
        ChoiMatrix { j, input_dim: n, output_dim: m }
    }

    /// Stinespring pair of `Φ*`: `Φ*(Y) = Σ_z A₀_z* Y A₁_z` with `A_b,z = (1 ⊗ e_z*) A_b`.
    pub fn adjoint(&self) -> Self {
        let (n, m, k) = (self.input_dim, self.output_dim, self.env_dim);
        let flip = |a: &ComplexMatrix| {
            ComplexMatrix::from_fn(n * k, m, |row, y| {
                let (i, z) = (row / k, row % k);
                a[(y * k + z, i)].conj()
            })
        };
        Self { a0: flip(&self.a0), a1: flip(&self.a1), input_dim: m, output_dim: n, env_dim: k }
    }

    /// `Ψ_b(X) = Tr_Y(A_b X A_b*)`, maps from `C^n` to the environment `C^k`.
    pub fn reduced_maps(&self) -> (StinespringPair, StinespringPair) {
        let (n, m, k) = (self.input_dim, self.output_dim, self.env_dim);
        let reduced = |a: &ComplexMatrix| {
            let b = swap_row_factors(a, m, k).expect("row count matches m·k");
            Self { a0: b.clone(), a1: b, input_dim: n, output_dim: k, env_dim: m }
        };
        (reduced(&self.a0), reduced(&self.a1))
    }

    /// `Ψ_b*(H) = A_b* (1_Y ⊗ H) A_b` for `H` on the environment.
    pub(crate) fn reduced_adjoint_apply(&self, which: usize, h: &ComplexMatrix) -> ComplexMatrix {
        let a = if which == 0 { &self.a0 } else { &self.a1 };
        let lifted = linalg::identity_kron(self.output_dim, h);
        &(&a.adjoint() * &lifted) * a
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChoiMatrix {
    j: ComplexMatrix,
    input_dim: usize,
    output_dim: usize,
}

impl ChoiMatrix {
    pub fn new(j: ComplexMatrix, n: usize, m: usize) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::Shape("Choi dimensions must be positive".into()));
        }
        if j.shape() != (m * n, m * n) {
            return Err(Error::Shape(format!(
                "Choi matrix must be {0}x{0} for n={n}, m={m}; got {1}x{2}",
                m * n,
                j.rows(),
                j.cols()
            )));
        }
        Ok(Self { j, input_dim: n, output_dim: m })
    }

    /// Choi matrix of the identity map: `vec(1) vec(1)*`.
    pub fn identity(n: usize) -> Self {
        let v = linalg::vec(&ComplexMatrix::identity(n));
        Self { j: outer(&v, &v), input_dim: n, output_dim: n }
    }

    /// Choi matrix of the transpose map on `C^n`, which is the swap operator.
    pub fn transpose_map(n: usize) -> Self {
        Self { j: linalg::swap_operator(n, n), input_dim: n, output_dim: n }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.j
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.output_dim
    }

    pub fn scaled(&self, s: C64) -> Self {
        Self { j: self.j.scale(s), ..self.clone() }
    }

    /// `Φ(X) = Tr_X(J (1_Y ⊗ Xᵀ))`.
    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        let (n, m) = (self.input_dim, self.output_dim);
        if x.shape() != (n, n) {
            return Err(Error::Shape(format!("map input must be {n}x{n}, got {}x{}", x.rows(), x.cols())));
        }
        // (J (1 ⊗ Xᵀ))[(a,i),(b,i)] summed over i equals Σ_{i,j} J[(a,i),(b,j)] X[i,j].
        Ok(ComplexMatrix::from_fn(m, m, |a, b| {
            let mut acc = ZERO;
            for i in 0..n {
                for jj in 0..n {
                    acc += self.j[(a * n + i, b * n + jj)] * x[(i, jj)];
                }
            }
            acc
        }))
    }

    /// `J(Φ*) = conj(W J(Φ) W*)` where `W` swaps the two tensor factors.
    pub fn adjoint(&self) -> Self {
        let swapped = swap_factors(&self.j, self.output_dim, self.input_dim).expect("square Choi matrix");
        Self { j: swapped.conj(), input_dim: self.output_dim, output_dim: self.input_dim }
    }

    /// `Tr_Y J(Φ)`, an operator on the input space.
    pub fn trace_output(&self) -> ComplexMatrix {
        partial_trace(&self.j, (self.output_dim, self.input_dim), Keep::Second).expect("shape checked")
    }

    pub fn spectral_norm(&self) -> Result<f64> {
        spectral_norm(&self.j)
    }

    /// Factors `J = Σ_t u_t v_t*` from its singular value decomposition, keeping
    /// singular values above `RANK_THRESHOLD·σ_max`, and sets the environment slices of
    /// `A₀`, `A₁` to `unvec(u_t)`, `unvec(v_t)`.
    pub fn to_stinespring(&self) -> Result<StinespringPair> {
        let (n, m) = (self.input_dim, self.output_dim);
        let smax = spectral_norm(&self.j)?;
        let triplets = if smax == 0.0 { Vec::new() } else { singular_triplets(&self.j, RANK_THRESHOLD * smax)? };
        let k = triplets.len().max(1);
        let mut a0 = ComplexMatrix::zeros(m * k, n);
        let mut a1 = ComplexMatrix::zeros(m * k, n);
        for (t, (sigma, u, v)) in triplets.iter().enumerate() {
            let root = sigma.sqrt();
            let ut = unvec(&u.iter().map(|z| z * root).collect::<Vec<_>>(), m, n)?;
            let vt = unvec(&v.iter().map(|z| z * root).collect::<Vec<_>>(), m, n)?;
            for y in 0..m {
                for x in 0..n {
                    a0[(y * k + t, x)] = ut[(y, x)];
                    a1[(y * k + t, x)] = vt[(y, x)];
                }
            }
        }
        StinespringPair::new(a0, a1, n, m, k)
    }

    pub fn is_psd(&self, tol: f64) -> Result<bool> {
        if self.j.hermitian_deviation() > tol {
            return Ok(false);
        }
        HermitianMatrix::symmetrize(&self.j).is_psd(tol)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ChannelRep {
    Stinespring(StinespringPair),
    Choi(ChoiMatrix),
}

impl ChannelRep {
    /// `(input_dim, output_dim)`.
    pub fn dims(&self) -> (usize, usize) {
        match self {
            Self::Stinespring(s) => (s.input_dim, s.output_dim),
            Self::Choi(c) => (c.input_dim, c.output_dim),
        }
    }

    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        match self {
            Self::Stinespring(s) => s.apply(x),
            Self::Choi(c) => c.apply(x),
        }
    }

    /// Adjoint map, in the same representation.
    pub fn adjoint(&self) -> Self {
        match self {
            Self::Stinespring(s) => Self::Stinespring(s.adjoint()),
            Self::Choi(c) => Self::Choi(c.adjoint()),
        }
    }

    pub fn to_choi(&self) -> ChoiMatrix {
        match self {
            Self::Stinespring(s) => s.to_choi(),
            Self::Choi(c) => c.clone(),
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        let s = C64::new(s, 0.0);
        match self {
            Self::Stinespring(p) => Self::Stinespring(p.scaled(s)),
            Self::Choi(c) => Self::Choi(c.scaled(s)),
        }
    }
}

impl From<StinespringPair> for ChannelRep {
    fn from(s: StinespringPair) -> Self {
        Self::Stinespring(s)
    }
}

impl From<ChoiMatrix> for ChannelRep {
    fn from(c: ChoiMatrix) -> Self {
        Self::Choi(c)
    }
}

pub fn choi_from_stinespring(s: &StinespringPair) -> ChoiMatrix {
    s.to_choi()
}

pub fn stinespring_from_choi(j: &ChoiMatrix) -> Result<StinespringPair> {
    j.to_stinespring()
}

pub fn apply(rep: &ChannelRep, x: &ComplexMatrix) -> Result<ComplexMatrix> {
    rep.apply(x)
}

pub fn adjoint(rep: &ChannelRep) -> ChannelRep {
    rep.adjoint()
}

/// `(Ψ₀, Ψ₁)` with `Ψ_b(X) = Tr_Y(A_b X A_b*)`.
pub fn reduced_maps(s: &StinespringPair) -> (ChannelRep, ChannelRep) {
    let (a, b) = s.reduced_maps();
    (a.into(), b.into())
}
