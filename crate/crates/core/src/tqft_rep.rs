//! Mapping-class-group representation matrices over Q(zeta_p), built on the
//! basis of admissible colorings of a chain-of-loops spine of the genus-g
//! handlebody.
//!
//! Supported curve families on the standard chain:
//! - a_i: the meridian of handle i. Its annulus operator is diagonal.
//! - b_i: the core of handle i. For end handles the operator acts on the
//!   loop color through a one-hole-torus block; certified for g <= 2.
//! - c_i: the curve linking handles i and i+1. At genus 2 it is computed by a
//!   recoupling move to the theta-graph basis where it becomes diagonal.
//!
//! Dehn twists are polynomial in the curve operators: the unique interpolation
//! sending the annulus eigenvalue lambda_c to the twist eigenvalue mu_c.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cyclotomic::{CycError, CyclotomicRat, RealSubfieldElem};
use crate::interval::complex_embed;
use crate::linalg::{LinalgError, Matrix};
use crate::skein::{SkeinError, SkeinParams};
use crate::CycMatrix;

#[derive(Debug, thiserror::Error)]
pub enum TqftError {
    #[error(transparent)]
    Skein(#[from] SkeinError),
    #[error(transparent)]
    Cyclotomic(#[from] CycError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("curve {0} does not exist at genus {1}")]
    NoSuchCurve(Curve, u64),
    #[error("curve {0} at genus {1} is outside the certified range; no exact construction is wired up for it")]
    Experimental(Curve, u64),
    #[error("operation requires genus {expected}, got {got}")]
    WrongGenus { expected: u64, got: u64 },
    #[error("invariant-form solve failed: {0}")]
    FormSolve(String),
    #[error("matrix is not unitary for the invariant form")]
    NotUnitary,
    #[error("interval sign determination failed to converge")]
    SignIndeterminate,
    #[error("determinant is not a root of unity in Q(zeta_p)")]
    DetNotRootOfUnity,
    #[error("determinant class {det_exp} has no n-th root correction for n = {n} (mod {modulus})")]
    DetNotCorrectable { det_exp: u64, n: u64, modulus: u64 },
    #[error("cache i/o: {0}")]
    CacheIo(#[from] std::io::Error),
    #[error("cache format: {0}")]
    CacheFormat(String),
}

/// A simple closed curve from the standard system on the genus-g surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Curve {
    /// Meridian of handle i (1-based).
    A(u64),
    /// Core of handle i (1-based).
    B(u64),
    /// Chain curve linking handles i and i+1 (1-based).
    C(u64),
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Curve::A(i) => write!(f, "a{i}"),
            Curve::B(i) => write!(f, "b{i}"),
            Curve::C(i) => write!(f, "c{i}"),
        }
    }
}

/// The representation context for a fixed (genus, p): spine basis plus the
/// interpolation polynomial turning curve operators into Dehn twists.
pub struct Rep {
    params: SkeinParams,
    g: u64,
    basis: Vec<Vec<u64>>,
    /// genus-2 only: theta-graph colorings (x1, x2, x3) in lexicographic
    /// order, and the recoupling matrix from the chain basis to that basis
    theta_data: Option<(Vec<[u64; 3]>, CycMatrix, CycMatrix)>,
    twist_poly: Vec<CyclotomicRat>,
}

impl Rep {
    pub fn new(g: u64, p: u64) -> Result<Self, TqftError> {
        let params = SkeinParams::new(p)?;
        if g == 0 {
            return Err(TqftError::Skein(SkeinError::BadGenus(0)));
        }
        let basis = params.chain_colorings(g)?;
        let twist_poly = twist_interpolation(&params)?;
        let theta_data = if g == 2 {
            Some(theta_change_of_basis(&params, &basis)?)
        } else {
            None
        };
        Ok(Rep { params, g, basis, theta_data, twist_poly })
    }

    pub fn genus(&self) -> u64 {
        self.g
    }

    pub fn p(&self) -> u64 {
        self.params.p()
    }

    pub fn params(&self) -> &SkeinParams {
        &self.params
    }

    /// Basis colorings in lexicographic order; the matrix indices below refer
    /// to positions in this list.
    pub fn basis(&self) -> &[Vec<u64>] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn zero(&self) -> CyclotomicRat {
        CyclotomicRat::zero(self.p())
    }

    /// Position of each spine edge relevant to a curve, in the edge layout of
    /// `SkeinParams::chain_colorings`.
    fn loop_edge(&self, i: u64) -> usize {
        if i == 1 {
            0
        } else if i == self.g {
            (3 * self.g - 4) as usize
        } else {
            // top arc of middle handle i
            (3 * (i - 1) - 1) as usize
        }
    }

    fn bridge_edge(&self, i: u64) -> usize {
        (3 * i - 2) as usize
    }

    fn check_curve(&self, curve: Curve) -> Result<(), TqftError> {
        let ok = match curve {
            Curve::A(i) => i >= 1 && i <= self.g,
            Curve::B(i) => i >= 1 && i <= self.g,
            Curve::C(i) => self.g >= 2 && i >= 1 && i < self.g,
        };
        if !ok {
            return Err(TqftError::NoSuchCurve(curve, self.g));
        }
        Ok(())
    }

    /// The annulus ("curve") operator z_gamma acting on the basis.
    pub fn curve_operator(&self, curve: Curve) -> Result<CycMatrix, TqftError> {
        self.check_curve(curve)?;
        match curve {
            Curve::A(i) => {
                self.diagonal_by_edge(self.loop_edge(i), |c| self.params.loop_eigenvalue(c))
            }
            Curve::B(i) => {
                if self.g == 1 {
                    self.end_core_operator(0, None)
                } else if i == 1 {
                    self.end_core_operator(0, Some(self.bridge_edge(1)))
                } else if i == self.g {
                    self.end_core_operator(self.loop_edge(self.g), Some(self.bridge_edge(self.g - 1)))
                } else {
                    Err(TqftError::Experimental(curve, self.g))
                }
            }
            Curve::C(_) => {
                if self.g != 2 {
                    return Err(TqftError::Experimental(curve, self.g));
                }
                let (thetas, to_theta, from_theta) =
                    self.theta_data.as_ref().expect("genus 2 has theta data");
                let mut diag = Vec::with_capacity(thetas.len());
                for t in thetas {
                    diag.push(self.params.loop_eigenvalue(t[2])?);
                }
                Ok(from_theta.mul(&Matrix::diagonal(diag)).mul(to_theta))
            }
        }
    }

    /// Dehn twist along the curve, as the interpolation polynomial applied to
    /// the curve operator. For meridians this is the diagonal twist matrix.
    pub fn dehn_twist(&self, curve: Curve) -> Result<CycMatrix, TqftError> {
        self.check_curve(curve)?;
        // diagonal shortcuts evaluate the same polynomial entrywise, so a
        // single code path suffices
        let z = self.curve_operator(curve)?;
        Ok(self.poly_of_matrix(&self.twist_poly, &z))
    }

    /// The canonical twist generating set for the mapping class group:
    /// genus 1: (a1, b1); genus 2: (a1, a2, b1, b2, c1) -- the five
    /// humphries-size twist curves that generate the full group.
    pub fn generator_curves(&self) -> Result<Vec<Curve>, TqftError> {
        match self.g {
            1 => Ok(vec![Curve::A(1), Curve::B(1)]),
            2 => Ok(vec![
                Curve::A(1),
                Curve::A(2),
                Curve::B(1),
                Curve::B(2),
                Curve::C(1),
            ]),
            g => Err(TqftError::Experimental(Curve::B(2), g)),
        }
    }

    pub fn generators(&self) -> Result<Vec<(Curve, CycMatrix)>, TqftError> {
        self.generator_curves()?
            .into_iter()
            .map(|c| Ok((c, self.dehn_twist(c)?)))
            .collect()
    }

    fn diagonal_by_edge(
        &self,
        edge: usize,
        mut f: impl FnMut(u64) -> Result<CyclotomicRat, SkeinError>,
    ) -> Result<CycMatrix, TqftError> {
        let mut diag = Vec::with_capacity(self.dim());
        for col in &self.basis {
            diag.push(f(col[edge])?);
        }
        Ok(Matrix::diagonal(diag))
    }

    /// Core-curve operator for an end handle: the one-holed-torus block. The
    /// loop color y maps to w with coefficient
    ///   delta_w * tet(y,y,c, w,w,k) / (theta(y,k,w) * theta(w,w,c)),
    /// where c is the adjacent bridge color (0 at genus 1) and k = p - 3 is
    /// the even color acting like a plain curve on even-colored strands.
    fn end_core_operator(
        &self,
        loop_edge: usize,
        bridge_edge: Option<usize>,
    ) -> Result<CycMatrix, TqftError> {
        let k = self.params.max_color();
        let n = self.dim();
        let mut out = Matrix::filled(n, n, self.zero());
        // index lookup for target colorings
        for (col_idx, sigma) in self.basis.iter().enumerate() {
            let y = sigma[loop_edge];
            let c = bridge_edge.map_or(0, |e| sigma[e]);
            for w in self.params.color_set() {
                if !self.params.admissible(y, k, w) || !self.params.admissible(w, w, c) {
                    continue;
                }
                let coeff = self
                    .params
                    .delta(w)?
                    .mul(&self.params.tet(y, y, c, w, w, k)?)
                    .div(&self.params.theta(y, k, w)?.mul(&self.params.theta(w, w, c)?))?;
                let mut target = sigma.clone();
                target[loop_edge] = w;
                let row_idx = self
                    .basis
                    .binary_search(&target)
                    .expect("admissible target coloring is in the basis");
                out.set(row_idx, col_idx, out.get(row_idx, col_idx).add(&coeff));
            }
        }
        Ok(out)
    }

    fn poly_of_matrix(&self, coeffs: &[CyclotomicRat], z: &CycMatrix) -> CycMatrix {
        // Horner evaluation
        let n = z.rows();
        let mut acc = Matrix::filled(n, n, self.zero());
        for c in coeffs.iter().rev() {
            acc = acc.mul(z);
            for i in 0..n {
                acc.set(i, i, acc.get(i, i).add(c));
            }
        }
        acc
    }

    /// The invariant Hermitian form, solved exactly from invariance under the
    /// generating twists: support is cut down by the diagonal generators'
    /// unimodular eigenvalue profiles, the rest is an exact kernel
    /// computation. The solution space must be one-dimensional; the returned
    /// matrix is normalized to 1 in its first diagonal entry.
    pub fn invariant_form(&self) -> Result<CycMatrix, TqftError> {
        let gens: Vec<CycMatrix> =
            self.generators()?.into_iter().map(|(_, m)| m).collect();
        let n = self.dim();
        let one = CyclotomicRat::one(self.p());
        // allowed support: pairs (i, j) with conj(d_i) d_j = 1 for every
        // diagonal generator (their entries are roots of unity)
        let mut support = Vec::new();
        for i in 0..n {
            'pair: for j in 0..n {
                for m in gens.iter().filter(|m| m.is_diagonal()) {
                    let di = m.get(i, i);
                    let dj = m.get(j, j);
                    if di.conjugate().mul(dj) != one {
                        continue 'pair;
                    }
                }
                support.push((i, j));
            }
        }
        let k = support.len();
        if k == 0 {
            return Err(TqftError::FormSolve("empty support".into()));
        }
        // rows: entries of conj(M)^T H M - H = 0 for non-diagonal generators
        let mut rows: Vec<Vec<CyclotomicRat>> = Vec::new();
        for m in gens.iter().filter(|m| !m.is_diagonal()) {
            let mc = m.map(|x| x.conjugate());
            for r in 0..n {
                for s in 0..n {
                    let mut row = vec![self.zero(); k];
                    for (idx, &(i, j)) in support.iter().enumerate() {
                        // coefficient of H_ij in (M^dagger H M)_{rs}
                        let mut co = mc.get(i, r).mul(m.get(j, s));
                        if (i, j) == (r, s) {
                            co = co.sub(&one);
                        }
                        row[idx] = co;
                    }
                    if row.iter().any(|x| !x.is_zero()) {
                        rows.push(row);
                    }
                }
            }
        }
        if rows.is_empty() {
            return Err(TqftError::FormSolve("no constraints from generators".into()));
        }
        let a = Matrix::from_rows(rows).map_err(TqftError::Linalg)?;
        let kernel = a.kernel();
        if kernel.len() != 1 {
            return Err(TqftError::FormSolve(format!(
                "solution space has dimension {} (expected 1)",
                kernel.len()
            )));
        }
        let sol = &kernel[0];
        let mut h = Matrix::filled(n, n, self.zero());
        for (idx, &(i, j)) in support.iter().enumerate() {
            h.set(i, j, sol[idx].clone());
        }
        // normalize first diagonal entry to 1
        let h00 = h.get(0, 0).clone();
        let scale = h00.inverse().map_err(|_| {
            TqftError::FormSolve("first diagonal entry of the solved form vanishes".into())
        })?;
        let h = h.scalar_mul(&scale);
        // the normalized solution must be Hermitian
        if h.map(|x| x.conjugate()).transpose() != h {
            return Err(TqftError::FormSolve("solved form is not Hermitian".into()));
        }
        Ok(h)
    }
}

/// Coefficients (constant first) of the unique polynomial of degree below the
/// number of colors with f(lambda_c) = mu_c: Lagrange interpolation over
/// Q(zeta_p).
pub fn twist_interpolation(params: &SkeinParams) -> Result<Vec<CyclotomicRat>, TqftError> {
    let p = params.p();
    let colors = params.color_set();
    let n = colors.len();
    let mut coeffs = vec![CyclotomicRat::zero(p); n];
    for &c in &colors {
        let lc = params.loop_eigenvalue(c)?;
        let mc = params.twist_coeff(c)?;
        // numerator polynomial prod_{c' != c} (x - lambda_{c'})
        let mut poly = vec![CyclotomicRat::one(p)];
        let mut denom = CyclotomicRat::one(p);
        for &c2 in &colors {
            if c2 == c {
                continue;
            }
            let l2 = params.loop_eigenvalue(c2)?;
            denom = denom.mul(&lc.sub(&l2));
            // poly *= (x - l2)
            let mut next = vec![CyclotomicRat::zero(p); poly.len() + 1];
            for (d, co) in poly.iter().enumerate() {
                next[d + 1] = next[d + 1].add(co);
                next[d] = next[d].sub(&co.mul(&l2));
            }
            poly = next;
        }
        let scale = mc.div(&denom)?;
        for (d, co) in poly.iter().enumerate() {
            coeffs[d] = coeffs[d].add(&co.mul(&scale));
        }
    }
    Ok(coeffs)
}

/// Genus-2 recoupling: the chain coloring (y1, c, y2) expands over the
/// theta-graph basis (x1, x2, x3) = (y1, y2, x) with coefficient
/// sixj(y1, y1, c, y2, y2, x). Returns (theta colorings, chain->theta matrix,
/// its inverse).
fn theta_change_of_basis(
    params: &SkeinParams,
    chain_basis: &[Vec<u64>],
) -> Result<(Vec<[u64; 3]>, CycMatrix, CycMatrix), TqftError> {
    let colors = params.color_set();
    let mut thetas = Vec::new();
    for &x1 in &colors {
        for &x2 in &colors {
            for &x3 in &colors {
                if params.admissible(x1, x2, x3) {
                    thetas.push([x1, x2, x3]);
                }
            }
        }
    }
    let n = chain_basis.len();
    assert_eq!(thetas.len(), n, "the two spine bases have equal size");
    let zero = CyclotomicRat::zero(params.p());
    let mut to_theta = Matrix::filled(n, n, zero);
    for (col, sigma) in chain_basis.iter().enumerate() {
        let (y1, c, y2) = (sigma[0], sigma[1], sigma[2]);
        for (row, t) in thetas.iter().enumerate() {
            if t[0] != y1 || t[1] != y2 {
                continue;
            }
            let coeff = params.sixj(y1, y1, c, y2, y2, t[2])?;
            to_theta.set(row, col, coeff);
        }
    }
    let from_theta = to_theta.inverse().map_err(|_| {
        TqftError::FormSolve("recoupling change of basis is singular".into())
    })?;
    Ok((thetas, to_theta, from_theta))
}

/// Genus-1 modular data: the diagonal twist matrix T, the S-matrix
/// S_{ab} = eta [ (a+1)(b+1) ], and the scalars eta = 1/D where
/// D = +-(Gauss sum)/(zeta - zeta^{-1}), the sign fixed by requiring the
/// canonical complex embedding of D to be positive.
pub struct Genus1Data {
    pub s: CycMatrix,
    pub t: CycMatrix,
    pub eta: CyclotomicRat,
    pub d: CyclotomicRat,
}

pub fn genus1_matrices(p: u64) -> Result<Genus1Data, TqftError> {
    let params = SkeinParams::new(p)?;
    let colors = params.color_set();
    // quadratic Gauss sum
    let mut gauss = CyclotomicRat::zero(p);
    for a in 1..p {
        let z = CyclotomicRat::zeta_pow(p, a as i64);
        gauss = if crate::arith::legendre(a, p) == 1 {
            gauss.add(&z)
        } else {
            gauss.sub(&z)
        };
    }
    let dz = CyclotomicRat::zeta_pow(p, 1).sub(&CyclotomicRat::zeta_pow(p, -1));
    let d_unsigned = gauss.div(&dz)?;
    let d = positive_real_choice(&d_unsigned)?;
    // D^2 = sum of delta_c^2 over the colors: an exact consistency identity
    let mut sq = CyclotomicRat::zero(p);
    for &c in &colors {
        let dc = params.delta(c)?;
        sq = sq.add(&dc.mul(&dc));
    }
    if d.mul(&d) != sq {
        return Err(TqftError::FormSolve(
            "global scale does not satisfy D^2 = sum of squared loop values".into(),
        ));
    }
    let eta = d.inverse()?;
    let n = colors.len();
    let mut s = Matrix::filled(n, n, CyclotomicRat::zero(p));
    for i in 0..n {
        for j in 0..n {
            let v = params
                .quantum_int(((colors[i] + 1) * (colors[j] + 1)) as i64)
                .mul(&eta);
            s.set(i, j, v);
        }
    }
    let mut t_diag = Vec::with_capacity(n);
    for &c in &colors {
        t_diag.push(params.twist_coeff(c)?);
    }
    Ok(Genus1Data { s, t: Matrix::diagonal(t_diag), eta, d })
}

/// Pick x or -x, whichever has a positive canonical embedding; the input must
/// be real and nonzero.
fn positive_real_choice(x: &CyclotomicRat) -> Result<CyclotomicRat, TqftError> {
    if !x.is_real() || x.is_zero() {
        return Err(TqftError::SignIndeterminate);
    }
    let mut prec = 128u32;
    while prec <= 2048 {
        let e = complex_embed(x, prec)?;
        if e.re.is_positive() {
            return Ok(x.clone());
        }
        if e.re.is_negative() {
            return Ok(x.neg());
        }
        prec *= 2;
    }
    Err(TqftError::SignIndeterminate)
}

/// conj(M)^T H M == H for every matrix.
pub fn verify_unitary(mats: &[CycMatrix], h: &CycMatrix) -> bool {
    mats.iter().all(|m| {
        let lhs = m.map(|x| x.conjugate()).transpose().mul(h).mul(m);
        lhs == *h
    })
}

/// The adjoint-trace invariant tr(M) * conj(tr(M)) - 1 of an H-unitary M;
/// always an element of the real subfield.
pub fn adjoint_trace(m: &CycMatrix, h: &CycMatrix) -> Result<RealSubfieldElem, TqftError> {
    if !verify_unitary(std::slice::from_ref(m), h) {
        return Err(TqftError::NotUnitary);
    }
    let tr = m.trace();
    let v = tr.mul(&tr.conjugate()).sub(&CyclotomicRat::one(tr.p()));
    RealSubfieldElem::new(v).map_err(TqftError::Cyclotomic)
}

/// Smallest e >= 1 with x^e = 1, searching up to `max`.
pub fn root_of_unity_order(x: &CyclotomicRat, max: u64) -> Option<u64> {
    let mut acc = x.clone();
    for e in 1..=max {
        if acc.is_one() {
            return Some(e);
        }
        acc = acc.mul(x);
    }
    None
}

/// Express x as xi^e with xi = -zeta (a generator of the 2p-th roots of unity
/// in Q(zeta_p)); None when x is not such a root.
pub fn as_root_of_unity(x: &CyclotomicRat) -> Option<u64> {
    let p = x.p();
    let xi = CyclotomicRat::zeta_pow(p, 1).neg();
    let mut acc = CyclotomicRat::one(p);
    for e in 0..2 * p {
        if *x == acc {
            return Some(e);
        }
        acc = acc.mul(&xi);
    }
    None
}

/// Rescale M by a 2p-th root of unity so its determinant becomes 1. Returns
/// the corrected matrix and the exponent k with scaling factor (-zeta)^k.
pub fn normalize_det(m: &CycMatrix) -> Result<(CycMatrix, u64), TqftError> {
    let p = m.sample().p();
    let det = m.det();
    let e = as_root_of_unity(&det).ok_or(TqftError::DetNotRootOfUnity)?;
    let n = m.rows() as u64;
    let modulus = 2 * p;
    for k in 0..modulus {
        if (n as u128 * k as u128 + e as u128) % modulus as u128 == 0 {
            let xi = CyclotomicRat::zeta_pow(p, 1).neg();
            let mut c = CyclotomicRat::one(p);
            for _ in 0..k {
                c = c.mul(&xi);
            }
            let out = m.scalar_mul(&c);
            debug_assert!(out.det().is_one());
            return Ok((out, k));
        }
    }
    Err(TqftError::DetNotCorrectable { det_exp: e, n, modulus })
}

/// Positive-definiteness of a Hermitian form, certified by interval
/// enclosures of the leading principal minors (exact determinants, then a
/// rigorous sign).
pub fn form_positive(h: &CycMatrix) -> Result<bool, TqftError> {
    form_positive_with_ceiling(h, 4096)
}

/// Like [`form_positive`] but with a caller-chosen precision ceiling for the
/// interval certification (minimum 128 bits is always attempted).
pub fn form_positive_with_ceiling(h: &CycMatrix, ceiling: u32) -> Result<bool, TqftError> {
    let n = h.rows();
    for k in 1..=n {
        let sub = Matrix::from_fn(k, k, |i, j| h.get(i, j).clone());
        let d = sub.det();
        if d.is_zero() {
            return Ok(false);
        }
        let mut prec = 128u32;
        loop {
            let e = complex_embed(&d, prec)?;
            if e.re.is_positive() {
                break;
            }
            if e.re.is_negative() {
                return Ok(false);
            }
            prec *= 2;
            if prec > ceiling.max(128) {
                return Err(TqftError::SignIndeterminate);
            }
        }
    }
    Ok(true)
}

/// The invariant Hermitian form in closed form, diagonal in the spine basis
/// with entries in the real subfield k.  Genus 1 is the identity (the
/// modular basis is already orthonormal for the invariant form); genus 2
/// carries the network norm of each basis coloring (y1, c, y2):
///
///   H_sigma = theta(y1, y1, c) theta(y2, y2, c) / (delta_y1 delta_y2 delta_c)
///
/// normalized so the first entry is 1.  Positive definiteness is certified
/// by interval arithmetic before returning.
pub fn hermitian_form(g: u64, params: &SkeinParams) -> Result<CycMatrix, TqftError> {
    let p = params.p();
    let h = match g {
        1 => Matrix::identity(params.color_set().len(), &CyclotomicRat::one(p)),
        2 => {
            let mut entries = Vec::new();
            for sigma in params.chain_colorings(2)? {
                let (y1, c, y2) = (sigma[0], sigma[1], sigma[2]);
                let v = params
                    .theta(y1, y1, c)?
                    .mul(&params.theta(y2, y2, c)?)
                    .div(
                        &params
                            .delta(y1)?
                            .mul(&params.delta(y2)?)
                            .mul(&params.delta(c)?),
                    )?;
                entries.push(v);
            }
            let scale = entries[0].inverse()?;
            Matrix::diagonal(entries).scalar_mul(&scale)
        }
        _ => return Err(TqftError::WrongGenus { expected: 2, got: g }),
    };
    for i in 0..h.rows() {
        let d = h.get(i, i);
        if *d != d.conjugate() {
            return Err(TqftError::FormSolve(
                "closed-form entry escapes the real subfield".into(),
            ));
        }
    }
    if !form_positive(&h)? {
        return Err(TqftError::FormSolve(
            "closed-form Hermitian form is not positive definite".into(),
        ));
    }
    Ok(h)
}

// ---- disk cache ----

#[derive(Serialize, Deserialize)]
struct CacheFile {
    schema_version: u32,
    convention: String,
    key: String,
    matrix: CycMatrix,
    sha256: String,
}

fn cache_digest(convention: &str, key: &str, matrix: &CycMatrix) -> Result<String, TqftError> {
    use sha2::{Digest, Sha256};
    let payload = serde_json::to_vec(&(convention, key, matrix))
        .map_err(|e| TqftError::CacheFormat(e.to_string()))?;
    let mut hasher = Sha256::new();
    hasher.update(&payload);
    Ok(hex::encode(hasher.finalize()))
}

/// Load the matrix for `key` from `dir`, or compute and atomically persist
/// it. Files are keyed by the convention marker, so artifacts produced under
/// different normalization conventions never collide; a corrupted or
/// mismatched file is recomputed and replaced.
pub fn cached_matrix(
    dir: &Path,
    key: &str,
    compute: impl FnOnce() -> Result<CycMatrix, TqftError>,
) -> Result<CycMatrix, TqftError> {
    use sha2::{Digest, Sha256};
    let mut tag = Sha256::new();
    tag.update(crate::CONVENTION.as_bytes());
    let tag = hex::encode(&tag.finalize()[..4]);
    let path = dir.join(format!("{key}-{tag}.json"));
    if let Ok(bytes) = std::fs::read(&path) {
        if let Ok(f) = serde_json::from_slice::<CacheFile>(&bytes) {
            if f.schema_version == crate::SCHEMA_VERSION
                && f.convention == crate::CONVENTION
                && f.key == key
                && cache_digest(&f.convention, &f.key, &f.matrix)? == f.sha256
            {
                return Ok(f.matrix);
            }
        }
    }
    let matrix = compute()?;
    std::fs::create_dir_all(dir)?;
    let record = CacheFile {
        schema_version: crate::SCHEMA_VERSION,
        convention: crate::CONVENTION.to_string(),
        key: key.to_string(),
        sha256: cache_digest(crate::CONVENTION, key, &matrix)?,
        matrix,
    };
    let tmp = tempfile::NamedTempFile::new_in(dir)?;
    serde_json::to_writer(tmp.as_file(), &record)
        .map_err(|e| TqftError::CacheFormat(e.to_string()))?;
    tmp.persist(&path).map_err(|e| TqftError::CacheIo(e.error))?;
    if let Ok(f) = serde_json::from_slice::<CacheFile>(&std::fs::read(&path)?) {
        Ok(f.matrix)
    } else {
        Err(TqftError::CacheFormat("freshly written cache file failed to parse".into()))
    }
}

/// Dehn-twist matrix with disk caching.
pub fn dehn_twist_cached(dir: &Path, g: u64, p: u64, curve: Curve) -> Result<CycMatrix, TqftError> {
    let key = format!("twist-g{g}-p{p}-{curve}");
    cached_matrix(dir, &key, || Rep::new(g, p)?.dehn_twist(curve))
}
