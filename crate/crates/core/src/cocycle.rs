//! The Rauzy–Veech cocycle `Θ`, its invariant cones and subspaces.
//!
//! Products are exact over `BigInt`; floating point only enters through cone
//! membership and normalized subspace bases.

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::combinatorics::{find_path, omega_matrix, rauzy_move, Letter, MoveType, Pair, RauzyPath};
use crate::error::{Error, Result};
use crate::linalg::{gram_determinant, norm2, normalized, rat_to_f64, IntMatrix, RatMatrix};

/// `Θ_{π,ε} = I + E_{loser, winner}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaMatrix {
    pub matrix: IntMatrix,
    pub pair: Pair,
    pub eps: MoveType,
    pub winner: Letter,
    pub loser: Letter,
}

pub fn theta_matrix(pair: &Pair, eps: MoveType) -> ThetaMatrix {
    let (winner, loser) = pair.winner_loser(eps);
    let mut m = IntMatrix::identity(pair.d());
    m[(loser, winner)] = BigInt::one();
    ThetaMatrix { matrix: m, pair: pair.clone(), eps, winner, loser }
}

impl ThetaMatrix {
    pub fn inverse(&self) -> IntMatrix {
        let mut m = IntMatrix::identity(self.pair.d());
        m[(self.loser, self.winner)] = -BigInt::one();
        m
    }
}

/// `Θ Ω_π Θᵀ = Ω_{π′}` for `π′ = r_ε(π)`, checked exactly.
pub fn check_theta_omega(pair: &Pair, eps: MoveType) -> bool {
    let t = theta_matrix(pair, eps).matrix;
    let lhs = t.mul(&omega_matrix(pair)).mul(&t.transpose());
    lhs == omega_matrix(&rauzy_move(pair, eps))
}

/// Exact products along a Rauzy path.
#[derive(Debug, Clone)]
pub struct CocyclePath {
    path: RauzyPath,
    thetas: Vec<ThetaMatrix>,
    /// `products[n] = Θ_{n−1}···Θ_0`, with `products[0] = I`.
    products: Vec<IntMatrix>,
    /// `inverse_products[n] = Θ_0⁻¹···Θ_{n−1}⁻¹`.
    inverse_products: Vec<IntMatrix>,
}

impl CocyclePath {
    pub fn new(path: &RauzyPath) -> Self {
        let d = path.start().d();
        let thetas: Vec<ThetaMatrix> = path.steps().iter().map(|s| theta_matrix(&s.pair, s.eps)).collect();
        let mut products = vec![IntMatrix::identity(d)];
        let mut inverse_products = vec![IntMatrix::identity(d)];
        for t in &thetas {
            // left multiplication by I + E_{l,w} adds row w to row l
            let mut p = products.last().expect("nonempty").clone();
            for j in 0..d {
                let v = p[(t.winner, j)].clone();
                p[(t.loser, j)] += v;
            }
            products.push(p);
            // right multiplication by I − E_{l,w} subtracts column l from column w
            let mut q = inverse_products.last().expect("nonempty").clone();
            for i in 0..d {
                let v = q[(i, t.loser)].clone();
                q[(i, t.winner)] -= v;
            }
            inverse_products.push(q);
        }
        CocyclePath { path: path.clone(), thetas, products, inverse_products }
    }

    pub fn from_moves(start: &Pair, moves: &[MoveType]) -> Self {
        Self::new(&RauzyPath::from_moves(start.clone(), moves))
    }

    pub fn len(&self) -> usize {
        self.thetas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thetas.is_empty()
    }

    pub fn d(&self) -> usize {
        self.path.start().d()
    }

    pub fn path(&self) -> &RauzyPath {
        &self.path
    }

    pub fn theta(&self, n: usize) -> &ThetaMatrix {
        &self.thetas[n]
    }

    /// `Θ_{0,n−1} = Θ_{n−1}···Θ_0` (identity for `n = 0`).
    pub fn product(&self, n: usize) -> &IntMatrix {
        &self.products[n]
    }

    /// `Θ_{0,n−1}⁻¹`.
    pub fn inverse_product(&self, n: usize) -> &IntMatrix {
        &self.inverse_products[n]
    }

    /// Pair at vertex `n` of the path.
    pub fn pair(&self, n: usize) -> Pair {
        if n < self.len() {
            self.thetas[n].pair.clone()
        } else {
            self.path.end()
        }
    }

    pub fn omega(&self, n: usize) -> IntMatrix {
        omega_matrix(&self.pair(n))
    }

    /// `Θ_{0,n−1}·(1,…,1)ᵀ`.
    pub fn return_times(&self, n: usize) -> Vec<BigInt> {
        let ones = vec![BigInt::one(); self.d()];
        self.products[n].mul_vec(&ones)
    }

    /// Whether every step satisfies `det Θ = 1` and the `Ω` identity.
    pub fn identities_hold(&self) -> bool {
        self.thetas.iter().all(|t| t.matrix.det() == BigInt::one() && check_theta_omega(&t.pair, t.eps))
    }
}

/// Which invariant cone to test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Cone {
    /// `C^s = Ω ℝ^d_+`
    Cs,
    /// `C^u = −Ω T⁺`
    Cu,
    /// `T⁺`
    Tplus,
}

/// Outcome of [`cone_membership`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Membership {
    /// `x` with `v = Ω x` (for `Cu`, `v = −Ω x`); for `Tplus`, `v` itself.
    Member { certificate: Vec<f64>, margin: f64 },
    OutsideImage { residual: f64 },
    OutsideCone { margin: f64 },
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member { .. })
    }
}

/// Residual and cone tolerance of [`cone_membership`].
pub const CONE_TOL: f64 = 1e-10;

/// The `2(d−1)` functionals defining `T⁺`, each required to be positive.
fn tplus_rows(pair: &Pair) -> Vec<Vec<f64>> {
    let d = pair.d();
    let mut rows = Vec::new();
    for k in 1..d {
        rows.push((0..d).map(|a| if pair.pi0(a) <= k { 1.0 } else { 0.0 }).collect());
        rows.push((0..d).map(|a| if pair.pi1(a) <= k { -1.0 } else { 0.0 }).collect());
    }
    rows
}

/// Maximizes `min_i (rows_i · y + offsets_i)` over `|y_j| ≤ bound` by
/// enumerating vertices. Returns the maximizer and the value.
pub fn maximize_min(rows: &[Vec<f64>], offsets: &[f64], dim: usize, bound: f64) -> Option<(Vec<f64>, f64)> {
    if dim == 0 {
        let t = offsets.iter().copied().fold(f64::INFINITY, f64::min);
        return Some((Vec::new(), t));
    }
    // constraints g·(y, t) ≥ h
    let mut cons: Vec<(Vec<f64>, f64)> = rows
        .iter()
        .zip(offsets)
        .map(|(r, &o)| {
            let mut g = r.clone();
            g.push(-1.0);
            (g, -o)
        })
        .collect();
    for j in 0..dim {
        let mut lo = vec![0.0; dim + 1];
        lo[j] = 1.0;
        cons.push((lo, -bound));
        let mut hi = vec![0.0; dim + 1];
        hi[j] = -1.0;
        cons.push((hi, -bound));
    }
    let n = dim + 1;
    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut idx: Vec<usize> = (0..n).collect();
    loop {
        let a = DMatrix::from_fn(n, n, |i, j| cons[idx[i]].0[j]);
        let b = DVector::from_fn(n, |i, _| cons[idx[i]].1);
        if let Some(z) = a.lu().solve(&b) {
            let feasible = cons.iter().all(|(g, h)| {
                let lhs: f64 = g.iter().zip(z.iter()).map(|(x, y)| x * y).sum();
                lhs >= h - 1e-9 * (1.0 + h.abs())
            });
            if feasible && z.iter().all(|x| x.is_finite()) {
                let t = z[dim];
                if best.as_ref().is_none_or(|(_, bt)| t > *bt) {
                    best = Some((z.iter().take(dim).copied().collect(), t));
                }
            }
        }
        // next combination
        let m = cons.len();
        let mut i = n;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if idx[i] < m - n + i {
                idx[i] += 1;
                for j in i + 1..n {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Least-squares solution of `Ω x = v` orthogonal to `Ker Ω`, the residual,
/// and an orthonormal basis of `Ker Ω` (as columns).
fn solve_in_image(omega: &IntMatrix, v: &[f64]) -> (Vec<f64>, f64, Vec<Vec<f64>>) {
    let o = omega.to_f64();
    let rhs = DVector::from_column_slice(v);
    let svd = o.clone().svd(true, true);
    let x = svd.solve(&rhs, 1e-12).expect("SVD solve");
    let residual = (&o * &x - &rhs).norm();
    let kernel = kernel_basis_f64(omega);
    (x.iter().copied().collect(), residual, kernel)
}

fn kernel_basis_f64(omega: &IntMatrix) -> Vec<Vec<f64>> {
    let k = omega.to_rational().kernel();
    let vs: Vec<Vec<f64>> = k.iter().map(|v| v.iter().map(rat_to_f64).collect()).collect();
    orthonormalize(&vs)
}

/// Gram–Schmidt.
pub fn orthonormalize(vs: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for v in vs {
        let mut w = v.clone();
        for u in &out {
            let p: f64 = w.iter().zip(u).map(|(a, b)| a * b).sum();
            for (x, y) in w.iter_mut().zip(u) {
                *x -= p * y;
            }
        }
        let n = norm2(&w);
        if n > 1e-12 {
            out.push(w.iter().map(|x| x / n).collect());
        }
    }
    out
}

/// Tests `v` against one of the cones at `pair`.
pub fn cone_membership(v: &[f64], pair: &Pair, which: Cone) -> Membership {
    let d = pair.d();
    assert_eq!(v.len(), d, "dimension mismatch");
    let scale = norm2(v);
    if which == Cone::Tplus {
        let margin = tplus_rows(pair)
            .iter()
            .map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum::<f64>())
            .fold(f64::INFINITY, f64::min);
        return if margin > 0.0 {
            Membership::Member { certificate: v.to_vec(), margin }
        } else {
            Membership::OutsideCone { margin }
        };
    }
    if scale == 0.0 {
        return Membership::OutsideCone { margin: 0.0 };
    }
    let omega = omega_matrix(pair);
    let target: Vec<f64> = match which {
        Cone::Cu => v.iter().map(|x| -x).collect(),
        _ => v.to_vec(),
    };
    let (x0, residual, kernel) = solve_in_image(&omega, &target);
    if residual > CONE_TOL * scale.max(1.0) {
        return Membership::OutsideImage { residual };
    }
    // functionals that must be positive on x = x0 + K y
    let rows: Vec<Vec<f64>> = match which {
        Cone::Cs => (0..d).map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect(),
        _ => tplus_rows(pair),
    };
    let k = kernel.len();
    let lp_rows: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| (0..k).map(|j| r.iter().zip(&kernel[j]).map(|(a, b)| a * b).sum()).collect())
        .collect();
    let offsets: Vec<f64> = rows.iter().map(|r| r.iter().zip(&x0).map(|(a, b)| a * b).sum()).collect();
    let bound = 1e6 * (1.0 + norm2(&x0));
    let (y, margin) = maximize_min(&lp_rows, &offsets, k, bound).expect("box-bounded LP is feasible");
    let mut x = x0;
    for (j, kv) in kernel.iter().enumerate() {
        for (xi, ki) in x.iter_mut().zip(kv) {
            *xi += y[j] * ki;
        }
    }
    if margin > -CONE_TOL * scale {
        Membership::Member { certificate: x, margin }
    } else {
        Membership::OutsideCone { margin }
    }
}

/// Chebyshev-like center of `T⁺` in the unit box.
pub fn tplus_center(pair: &Pair) -> Vec<f64> {
    let rows = tplus_rows(pair);
    let offsets = vec![0.0; rows.len()];
    let (tau, _) = maximize_min(&rows, &offsets, pair.d(), 1.0).expect("T+ is nonempty");
    tau
}

/// `u₀ = −Ω τ` for the center `τ` of `T⁺`, normalized.
pub fn canonical_unstable_vector(pair: &Pair) -> Vec<f64> {
    let tau = tplus_center(pair);
    let o = omega_matrix(pair).to_f64();
    let u = -(o * DVector::from_column_slice(&tau));
    normalized(u.as_slice())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GrowthDirection {
    /// `‖Θ_{0,n} v‖` for `v ∈ C^u` at the start.
    ForwardUnstable,
    /// `‖Θ_{N−n,N−1}⁻¹ v‖` for `v ∈ C^s` at the end.
    BackwardStable,
}

#[derive(Debug, Clone, Serialize)]
pub struct Growth {
    pub norms: Vec<f64>,
    pub factors: Vec<f64>,
    /// `exp` of the least-squares slope of `ln ‖·‖` over the last half.
    pub rate: f64,
}

/// Least-squares slope of `ys` against `xs`.
pub fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Growth of cone vectors along the path.
pub fn growth_estimate(path: &CocyclePath, v: &[f64], direction: GrowthDirection) -> Result<Growth> {
    let n = path.len();
    if n < 2 {
        return Err(Error::InvalidArgument("growth needs at least 2 steps".into()));
    }
    let norms: Vec<f64> = match direction {
        GrowthDirection::ForwardUnstable => {
            if !cone_membership(v, &path.pair(0), Cone::Cu).is_member() {
                return Err(Error::ConePrecondition("v is not in C^u at the start".into()));
            }
            (0..=n).map(|k| norm2(&path.product(k).mul_vec_f64(v))).collect()
        }
        GrowthDirection::BackwardStable => {
            if !cone_membership(v, &path.pair(n), Cone::Cs).is_member() {
                return Err(Error::ConePrecondition("v is not in C^s at the end".into()));
            }
            let mut w = v.to_vec();
            let mut out = vec![norm2(&w)];
            for k in (0..n).rev() {
                w = path.theta(k).inverse().mul_vec_f64(&w);
                out.push(norm2(&w));
            }
            out
        }
    };
    let factors = norms.windows(2).map(|w| w[1] / w[0]).collect();
    let half = norms.len() / 2;
    let xs: Vec<f64> = (half..norms.len()).map(|k| k as f64).collect();
    let ys: Vec<f64> = norms[half..].iter().map(|x| x.ln()).collect();
    let rate = ls_slope(&xs, &ys).exp();
    Ok(Growth { norms, factors, rate })
}

/// Unit vectors spanning an approximate invariant subspace.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubspaceBasis {
    pub vectors: Vec<Vec<f64>>,
    /// Method-specific diagnostic (angular diameter, Cauchy increment, …).
    pub residual: f64,
}

impl SubspaceBasis {
    pub fn new(vectors: Vec<Vec<f64>>, residual: f64) -> Result<Self> {
        let vectors: Vec<Vec<f64>> = vectors.iter().map(|v| normalized(v)).collect();
        if !vectors.is_empty() {
            let g = gram_determinant(&vectors);
            if !(g > 1e-10) {
                return Err(Error::DegenerateBasis(g));
            }
        }
        Ok(SubspaceBasis { vectors, residual })
    }

    pub fn trivial() -> Self {
        SubspaceBasis { vectors: Vec::new(), residual: 0.0 }
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }
}

/// Largest angle between two of the given directions.
fn angular_diameter(vs: &[Vec<f64>]) -> f64 {
    let mut best: f64 = 0.0;
    for i in 0..vs.len() {
        for j in i + 1..vs.len() {
            let a = normalized(&vs[i]);
            let b = normalized(&vs[j]);
            let c: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
            let diff: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
            // 2·asin(|a−b|/2) is accurate for nearly parallel directions
            let ang = if c >= 0.0 {
                2.0 * (norm2(&diff) / 2.0).min(1.0).asin()
            } else {
                std::f64::consts::PI - 2.0 * (norm2(&a.iter().zip(&b).map(|(x, y)| x + y).collect::<Vec<_>>()) / 2.0).min(1.0).asin()
            };
            best = best.max(ang);
        }
    }
    best
}

/// Stable-cone pullback with its angular diameters at depths `1..=m`.
#[derive(Debug, Clone, Serialize)]
pub struct StableApprox {
    pub basis: SubspaceBasis,
    pub diameters: Vec<f64>,
}

/// Generators of `C^s_{π^m}` pulled back to level 0.
fn pulled_back_generators(path: &CocyclePath, m: usize) -> Vec<Vec<f64>> {
    let omega = path.omega(m);
    let inv = path.inverse_product(m);
    let d = path.d();
    (0..d)
        .map(|j| (0..d).map(|i| omega[(i, j)].clone()).collect::<Vec<BigInt>>())
        .filter(|c| c.iter().any(|x| !x.is_zero()))
        .map(|c| inv.mul_vec(&c).iter().map(crate::linalg::big_to_f64).collect())
        .collect()
}

/// `E^s_0 ≈ Θ_{0,m−1}⁻¹ C^s_{π^m}` as a ray.
pub fn stable_subspace_approx(path: &CocyclePath, m: usize) -> Result<StableApprox> {
    if m == 0 || m > path.len() {
        return Err(Error::InvalidArgument(format!("depth {m} outside 1..={}", path.len())));
    }
    let diameters: Vec<f64> = (1..=m).map(|k| angular_diameter(&pulled_back_generators(path, k))).collect();
    let gens = pulled_back_generators(path, m);
    if m > 1 && !(diameters[m - 1] < diameters[0]) {
        return Err(Error::NoContraction(format!(
            "angular diameter {:e} at depth {m} vs {:e} at depth 1",
            diameters[m - 1], diameters[0]
        )));
    }
    let mut ray = vec![0.0; path.d()];
    for g in &gens {
        for (r, x) in ray.iter_mut().zip(normalized(g)) {
            *r += x;
        }
    }
    let basis = SubspaceBasis::new(vec![ray], diameters[m - 1])?;
    Ok(StableApprox { basis, diameters })
}

/// Exact central space of a closed path.
#[derive(Debug, Clone)]
pub struct CentralSpace {
    /// Exact basis of `{v : Θ_{0,p−1} v = v}`.
    pub exact: Vec<Vec<BigRational>>,
    /// `Ψ_p` as a `d × d` matrix acting on `Ker Ω_{π⁰}`.
    pub psi: RatMatrix,
    pub basis: SubspaceBasis,
    pub period: usize,
}

fn rational_vector_f64(v: &[BigRational]) -> Vec<f64> {
    v.iter().map(rat_to_f64).collect()
}

/// Orthogonal projector onto the span of the columns of `k`.
fn projector(k: &RatMatrix) -> RatMatrix {
    if k.cols() == 0 {
        return RatMatrix::zeros(k.rows(), k.rows());
    }
    let gram = k.transpose().mul(k);
    let inv = gram.inverse().expect("independent columns");
    k.mul(&inv).mul(&k.transpose())
}

/// Fixed space of the period matrix of a closed path, as the graph of `Ψ_p`
/// over `Ker Ω_{π⁰}`.
pub fn periodic_central_space(path: &CocyclePath) -> Result<CentralSpace> {
    let p = path.len();
    if p == 0 || path.path().end() != *path.path().start() {
        return Err(Error::NotPeriodic("the path does not return to its start".into()));
    }
    let d = path.d();
    let omega = path.omega(0);
    let expected = d - omega.rank();
    let period = path.product(p);
    let fixed = period.sub(&IntMatrix::identity(d)).to_rational().kernel();
    if fixed.len() != expected {
        return Err(Error::UnexpectedSpectrum { found: fixed.len(), expected });
    }
    let kernel = omega.to_rational().kernel();
    let kmat = RatMatrix::from_columns(&kernel, d);
    let pk = projector(&kmat);
    let vmat = RatMatrix::from_columns(&fixed, d);
    let w = pk.mul(&vmat);
    let psi = if expected == 0 {
        RatMatrix::zeros(d, d)
    } else {
        let gram = w.transpose().mul(&w);
        let Some(ginv) = gram.inverse() else {
            return Err(Error::Transversality);
        };
        vmat.mul(&ginv).mul(&w.transpose()).sub(&RatMatrix::identity(d)).mul(&pk)
    };
    let vectors: Vec<Vec<f64>> = fixed.iter().map(|v| rational_vector_f64(v)).collect();
    let basis = SubspaceBasis::new(orthonormalize(&vectors), 0.0)?;
    Ok(CentralSpace { exact: fixed, psi, basis, period: p })
}

/// `E^c_{0,p_n}` along the closures `γ_n` of a path, with Cauchy increments.
#[derive(Debug, Clone)]
pub struct CentralLimit {
    pub ladder: Vec<usize>,
    pub spaces: Vec<CentralSpace>,
    /// Frobenius norms `‖Ψ_{p_{k+1}} − Ψ_{p_k}‖`.
    pub increments: Vec<f64>,
    pub accepted: bool,
}

impl CentralLimit {
    pub fn last(&self) -> &CentralSpace {
        self.spaces.last().expect("nonempty ladder")
    }

    /// Exact vectors `k + Ψ(k)` for a basis `k` of `Ker Ω_{π⁰}`.
    pub fn graph_vectors(&self, pair: &Pair) -> Vec<Vec<BigRational>> {
        let kernel = omega_matrix(pair).to_rational().kernel();
        let psi = &self.last().psi;
        kernel
            .iter()
            .map(|k| k.iter().zip(psi.mul_vec(k)).map(|(a, b)| a + b).collect())
            .collect()
    }
}

/// Increment below which the ladder is accepted as converged.
pub const CENTRAL_TOL: f64 = 1e-8;

/// Closes the prefixes of length `n ∈ ladder` back to the start pair with
/// [`find_path`] and computes each periodic central space.
pub fn central_space_limit(path: &RauzyPath, ladder: &[usize]) -> Result<CentralLimit> {
    let start = path.start().clone();
    let mut spaces = Vec::new();
    for &n in ladder {
        if n > path.len() {
            return Err(Error::InvalidArgument(format!("prefix {n} longer than the path")));
        }
        let prefix = path.prefix(n);
        let closing = find_path(&prefix.end(), &start)?;
        let mut closed = prefix;
        for e in closing {
            closed.push(e);
        }
        if closed.is_empty() {
            // n = 0 at a vertex already equal to the start: use a loop
            return Err(Error::InvalidArgument("ladder entries must be positive".into()));
        }
        spaces.push(periodic_central_space(&CocyclePath::new(&closed))?);
    }
    let increments: Vec<f64> = spaces
        .windows(2)
        .map(|w| {
            let diff = w[1].psi.sub(&w[0].psi).to_f64();
            diff.norm()
        })
        .collect();
    let accepted = increments.last().is_none_or(|&x| x < CENTRAL_TOL) || increments.windows(2).all(|w| w[1] <= w[0]);
    Ok(CentralLimit { ladder: ladder.to_vec(), spaces, increments, accepted })
}

/// `max_n ‖Θ_{0,n} v‖ / min_n ‖Θ_{0,n} v‖` for `n ≤ upto`, computed exactly
/// before rounding.
pub fn quasi_isometry_ratio(path: &CocyclePath, v: &[BigRational], upto: usize) -> f64 {
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for n in 0..=upto.min(path.len()) {
        let w = path.product(n).to_rational().mul_vec(v);
        let nrm = norm2(&rational_vector_f64(&w));
        lo = lo.min(nrm);
        hi = hi.max(nrm);
    }
    hi / lo
}

/// JSON export of an exact matrix.
pub fn matrix_strings(m: &IntMatrix) -> Vec<Vec<String>> {
    m.to_strings()
}
