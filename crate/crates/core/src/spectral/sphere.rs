//! Harmonic analysis on the boundary spheres `S¹` and `S²`.
//!
//! All bases are orthonormal for the normalized round measure (total mass 1)
//! on the unit-radius sphere, so the Laplacian eigenvalues are `m²` on `S¹`
//! and `l(l+1)` on `S²`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use super::quad::{gauss_legendre, graded_panels, panel_rule};
use crate::error::{Error, Result};
use crate::groups::GroupParams;
use crate::scalars::FieldTag;

/// Largest zero-mode coefficient accepted by [`dual_norm_w`].
pub const ZERO_MASS_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SphereBasis {
    /// `e^{imθ}` on `S¹`, `|m| ≤ band`, stored at index `m + band`.
    Circle { band: usize },
    /// Real spherical harmonics `Y_{l,k}` on `S²` (cosine for `k ≥ 0`, sine
    /// for `k < 0`), stored at index `l² + l + k`.
    Harmonics { lmax: usize },
    /// Zonal harmonics `√(2l+1) P_l(cos θ)` on `S²`, stored at index `l`.
    Zonal { lmax: usize },
}

/// Coefficients of a function or density in a [`SphereBasis`].
#[derive(Debug, Clone, PartialEq)]
pub struct SphereSpectrum {
    pub basis: SphereBasis,
    pub coefficients: Vec<Complex64>,
}

impl SphereBasis {
    pub fn len(&self) -> usize {
        match *self {
            SphereBasis::Circle { band } => 2 * band + 1,
            SphereBasis::Harmonics { lmax } => (lmax + 1) * (lmax + 1),
            SphereBasis::Zonal { lmax } => lmax + 1,
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Dimension of the sphere the basis lives on.
    pub fn sphere_dim(&self) -> usize {
        match self {
            SphereBasis::Circle { .. } => 1,
            _ => 2,
        }
    }

    /// `|m|` on `S¹`, `l` on `S²`.
    pub fn degree(&self, idx: usize) -> usize {
        match *self {
            SphereBasis::Circle { band } => (idx as isize - band as isize).unsigned_abs(),
            SphereBasis::Harmonics { .. } => (idx as f64).sqrt().floor() as usize,
            SphereBasis::Zonal { .. } => idx,
        }
    }

    /// Laplacian eigenvalue of mode `idx`.
    pub fn eigenvalue(&self, idx: usize) -> f64 {
        let k = self.degree(idx) as f64;
        match self {
            SphereBasis::Circle { .. } => k * k,
            _ => k * (k + 1.0),
        }
    }

    pub fn zero_index(&self) -> usize {
        match *self {
            SphereBasis::Circle { band } => band,
            _ => 0,
        }
    }
}

impl SphereSpectrum {
    pub fn zeros(basis: SphereBasis) -> Self {
        SphereSpectrum {
            basis,
            coefficients: vec![Complex64::new(0.0, 0.0); basis.len()],
        }
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        (0..self.basis.len())
            .map(|i| self.basis.eigenvalue(i))
            .collect()
    }

    pub fn zero_mode(&self) -> Complex64 {
        self.coefficients[self.basis.zero_index()]
    }

    /// Coefficient of `e^{imθ}` on `S¹`.
    pub fn circle_mode(&self, m: isize) -> Complex64 {
        match self.basis {
            SphereBasis::Circle { band } if m.unsigned_abs() <= band => {
                self.coefficients[(m + band as isize) as usize]
            }
            _ => Complex64::new(0.0, 0.0),
        }
    }

    /// `Σ |ĉ|²`, the squared `L²` norm.
    pub fn norm_sqr(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `∫ ā b dσ = Σ conj(â) b̂`.
    pub fn pairing(&self, other: &SphereSpectrum) -> Result<Complex64> {
        if self.basis != other.basis {
            return Err(Error::Usage("pairing spectra in different bases".into()));
        }
        Ok(self
            .coefficients
            .iter()
            .zip(&other.coefficients)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `(Σ_{λ>0} λˢ |ĉ|²)^{1/2}`.
    pub fn homogeneous_norm(&self, s: f64) -> f64 {
        self.coefficients
            .iter()
            .enumerate()
            .filter(|(i, _)| self.basis.degree(*i) > 0)
            .map(|(i, c)| self.basis.eigenvalue(i).powf(s) * c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_diff(&self, other: &SphereSpectrum) -> f64 {
        self.coefficients
            .iter()
            .zip(&other.coefficients)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

// ---------------------------------------------------------------- S¹

/// Uniform angles `2πj/n`.
pub fn circle_nodes(n: usize) -> Vec<f64> {
    (0..n).map(|j| 2.0 * PI * j as f64 / n as f64).collect()
}

/// Fourier coefficients `(1/n) Σ f(θⱼ) e^{−imθⱼ}` for `|m| ≤ band`.
pub fn circle_transform(samples: &[Complex64], band: usize) -> Result<SphereSpectrum> {
    let n = samples.len();
    if n < 2 * band + 1 {
        return Err(Error::Usage(format!(
            "{n} samples cannot resolve band {band} on S¹"
        )));
    }
    let mut buf = samples.to_vec();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    let coefficients = (-(band as isize)..=band as isize)
        .map(|m| buf[m.rem_euclid(n as isize) as usize] * scale)
        .collect();
    Ok(SphereSpectrum {
        basis: SphereBasis::Circle { band },
        coefficients,
    })
}

pub fn circle_transform_real(samples: &[f64], band: usize) -> Result<SphereSpectrum> {
    let c: Vec<Complex64> = samples.iter().map(|v| Complex64::new(*v, 0.0)).collect();
    circle_transform(&c, band)
}

/// Samples of `Σ ĉ_m e^{imθ}` at `n` uniform angles.
pub fn circle_inverse(spec: &SphereSpectrum, n: usize) -> Result<Vec<Complex64>> {
    let SphereBasis::Circle { band } = spec.basis else {
        return Err(Error::Usage(
            "circle_inverse needs a circle spectrum".into(),
        ));
    };
    if n < 2 * band + 1 {
        return Err(Error::Usage(format!(
            "{n} samples cannot hold band {band} on S¹"
        )));
    }
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for m in -(band as isize)..=band as isize {
        buf[m.rem_euclid(n as isize) as usize] += spec.coefficients[(m + band as isize) as usize];
    }
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    Ok(buf)
}

// ---------------------------------------------------------------- S²

/// Gauss–Legendre in `cos θ` times uniform `φ`.
#[derive(Debug, Clone)]
pub struct S2Grid {
    pub nlat: usize,
    pub nlon: usize,
    pub cos_theta: Vec<f64>,
    /// Latitude weights normalized so that `Σᵢ wᵢ = 1`.
    pub weights: Vec<f64>,
}

impl S2Grid {
    /// The smallest product grid that is exact for degree `2·lmax` products.
    pub fn for_band(lmax: usize) -> Self {
        S2Grid::new(lmax + 1, 2 * lmax + 2)
    }

    pub fn new(nlat: usize, nlon: usize) -> Self {
        let rule = gauss_legendre(nlat);
        S2Grid {
            nlat,
            nlon,
            cos_theta: rule.iter().map(|p| p.0).collect(),
            weights: rule.iter().map(|p| p.1 / 2.0).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.nlat * self.nlon
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn phi(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.nlon as f64
    }

    /// Unit vector of node `(i, j)`, with the polar axis last.
    pub fn point(&self, i: usize, j: usize) -> [f64; 3] {
        let c = self.cos_theta[i];
        let s = (1.0 - c * c).max(0.0).sqrt();
        let p = self.phi(j);
        [s * p.cos(), s * p.sin(), c]
    }

    /// Quadrature weight of node `(i, j)` for the normalized measure.
    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i] / self.nlon as f64
    }

    pub fn points(&self) -> Vec<[f64; 3]> {
        (0..self.nlat)
            .flat_map(|i| (0..self.nlon).map(move |j| (i, j)))
            .map(|(i, j)| self.point(i, j))
            .collect()
    }
}

#[inline]
fn tri(l: usize, m: usize) -> usize {
    l * (l + 1) / 2 + m
}

/// Fully normalized associated Legendre functions `P̄_{l,m}(x)` for
/// `0 ≤ m ≤ l ≤ lmax`, with `∫ P̄²_{l,m} cos²(mφ) dσ/4π = 1` for `m > 0`
/// after including the `cos`/`sin` factor, and `= 1` for `m = 0`.
pub fn normalized_legendre(lmax: usize, x: f64) -> Vec<f64> {
    let mut p = vec![0.0; tri(lmax, lmax) + 1];
    let s = (1.0 - x * x).max(0.0).sqrt();
    p[0] = 1.0;
    for m in 1..=lmax {
        let f = if m == 1 {
            3f64.sqrt()
        } else {
            ((2 * m + 1) as f64 / (2 * m) as f64).sqrt()
        };
        p[tri(m, m)] = f * s * p[tri(m - 1, m - 1)];
    }
    for m in 0..lmax {
        p[tri(m + 1, m)] = ((2 * m + 3) as f64).sqrt() * x * p[tri(m, m)];
        for l in m + 2..=lmax {
            let (lf, mf) = (l as f64, m as f64);
            let a = ((2.0 * lf - 1.0) * (2.0 * lf + 1.0) / ((lf - mf) * (lf + mf))).sqrt();
            let b = ((2.0 * lf + 1.0) * (lf + mf - 1.0) * (lf - mf - 1.0)
                / ((lf - mf) * (lf + mf) * (2.0 * lf - 3.0)))
                .sqrt();
            p[tri(l, m)] = a * x * p[tri(l - 1, m)] - b * p[tri(l - 2, m)];
        }
    }
    p
}

/// `Y_{l,k}` at a unit vector `(x₁, x₂, x₃)` with polar axis `x₃`.
pub fn real_harmonic(l: usize, k: isize, point: [f64; 3]) -> f64 {
    let m = k.unsigned_abs();
    assert!(m <= l, "harmonic order out of range");
    let p = normalized_legendre(l, point[2].clamp(-1.0, 1.0))[tri(l, m)];
    let phi = point[1].atan2(point[0]);
    if k >= 0 {
        p * (m as f64 * phi).cos()
    } else {
        p * (m as f64 * phi).sin()
    }
}

/// Row-major samples on an [`S2Grid`] to real-harmonic coefficients.
pub fn harmonic_transform(
    grid: &S2Grid,
    samples: &[Complex64],
    lmax: usize,
) -> Result<SphereSpectrum> {
    if samples.len() != grid.len() {
        return Err(Error::Usage(format!(
            "{} samples for an S² grid of {}",
            samples.len(),
            grid.len()
        )));
    }
    if grid.nlat < lmax + 1 || grid.nlon < 2 * lmax + 1 {
        return Err(Error::Usage(format!(
            "S² grid {}×{} cannot resolve lmax {lmax}",
            grid.nlat, grid.nlon
        )));
    }
    let nlon = grid.nlon;
    // Per latitude: A(m) = (1/nlon) Σⱼ f e^{−imφⱼ}, then cos/sin moments.
    let rows: Vec<Vec<Complex64>> = (0..grid.nlat)
        .into_par_iter()
        .map(|i| {
            let mut buf = samples[i * nlon..(i + 1) * nlon].to_vec();
            FftPlanner::new().plan_fft_forward(nlon).process(&mut buf);
            let p = normalized_legendre(lmax, grid.cos_theta[i]);
            let w = grid.weights[i] / nlon as f64;
            let mut out = vec![Complex64::new(0.0, 0.0); (lmax + 1) * (lmax + 1)];
            for m in 0..=lmax {
                let a_pos = buf[m % nlon];
                let a_neg = buf[(nlon - m) % nlon];
                let cos_m = (a_pos + a_neg) * 0.5;
                let sin_m = (a_neg - a_pos) * Complex64::new(0.0, -0.5);
                for l in m..=lmax {
                    let base = l * l + l;
                    let pw = p[tri(l, m)] * w;
                    if m == 0 {
                        out[base] += a_pos * pw;
                    } else {
                        out[base + m] += cos_m * pw;
                        out[base - m] += sin_m * pw;
                    }
                }
            }
            out
        })
        .collect();
    let mut coefficients = vec![Complex64::new(0.0, 0.0); (lmax + 1) * (lmax + 1)];
    for row in rows {
        for (c, r) in coefficients.iter_mut().zip(row) {
            *c += r;
        }
    }
    Ok(SphereSpectrum {
        basis: SphereBasis::Harmonics { lmax },
        coefficients,
    })
}

/// Real-harmonic coefficients to row-major samples on an [`S2Grid`].
pub fn harmonic_inverse(spec: &SphereSpectrum, grid: &S2Grid) -> Result<Vec<Complex64>> {
    let SphereBasis::Harmonics { lmax } = spec.basis else {
        return Err(Error::Usage(
            "harmonic_inverse needs a harmonic spectrum".into(),
        ));
    };
    let rows: Vec<Vec<Complex64>> = (0..grid.nlat)
        .into_par_iter()
        .map(|i| {
            let p = normalized_legendre(lmax, grid.cos_theta[i]);
            (0..grid.nlon)
                .map(|j| {
                    let phi = grid.phi(j);
                    let mut v = Complex64::new(0.0, 0.0);
                    for l in 0..=lmax {
                        let base = l * l + l;
                        v += spec.coefficients[base] * p[tri(l, 0)];
                        for m in 1..=l {
                            let (s, c) = (m as f64 * phi).sin_cos();
                            v += spec.coefficients[base + m] * (p[tri(l, m)] * c);
                            v += spec.coefficients[base - m] * (p[tri(l, m)] * s);
                        }
                    }
                    v
                })
                .collect()
        })
        .collect();
    Ok(rows.concat())
}

// ---------------------------------------------------------------- zonal

/// A `θ`-rule on `[0, π]` for zonal transforms up to `lmax`, refined toward
/// `θ = 0` down to the length `scale`.
pub fn zonal_rule(lmax: usize, scale: f64) -> Vec<(f64, f64)> {
    let max_width = (10.0 / lmax.max(1) as f64).min(0.1);
    let levels = ((scale.max(1e-300) / 1e-12).log2().ceil().max(0.0) as usize).min(40);
    panel_rule(
        &graded_panels(PI, scale.min(1.0), max_width, levels.min(30)),
        20,
    )
}

/// Unit-normalized Legendre values `√(2l+1) P_l(x)`, `l ≤ lmax`.
pub fn zonal_values(lmax: usize, x: f64, out: &mut Vec<f64>) {
    out.clear();
    let (mut p0, mut p1) = (1.0, x);
    out.push(1.0);
    if lmax >= 1 {
        out.push(3f64.sqrt() * x);
    }
    for l in 1..lmax {
        let lf = l as f64;
        let p2 = ((2.0 * lf + 1.0) * x * p1 - lf * p0) / (lf + 1.0);
        out.push((2.0 * lf + 3.0).sqrt() * p2);
        p0 = p1;
        p1 = p2;
    }
}

/// Zonal coefficients `ĉ_l = ½ ∫₀^π f(θ) √(2l+1) P_l(cos θ) sin θ dθ` by the
/// given `θ`-rule.
pub fn zonal_transform<F>(f: F, lmax: usize, rule: &[(f64, f64)]) -> SphereSpectrum
where
    F: Fn(f64) -> f64 + Sync,
{
    const CHUNK: usize = 256;
    let partial: Vec<Vec<f64>> = rule
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut acc = vec![0.0; lmax + 1];
            let mut vals = Vec::with_capacity(lmax + 1);
            for &(theta, w) in chunk {
                let fw = 0.5 * w * f(theta) * theta.sin();
                if fw == 0.0 {
                    continue;
                }
                zonal_values(lmax, theta.cos(), &mut vals);
                for (a, v) in acc.iter_mut().zip(&vals) {
                    *a += fw * v;
                }
            }
            acc
        })
        .collect();
    let mut c = vec![0.0; lmax + 1];
    for part in partial {
        for (a, b) in c.iter_mut().zip(part) {
            *a += b;
        }
    }
    SphereSpectrum {
        basis: SphereBasis::Zonal { lmax },
        coefficients: c.into_iter().map(|v| Complex64::new(v, 0.0)).collect(),
    }
}

/// `Σ ĉ_l √(2l+1) P_l(cos θ)`.
pub fn zonal_evaluate(spec: &SphereSpectrum, theta: f64) -> Result<Complex64> {
    let SphereBasis::Zonal { lmax } = spec.basis else {
        return Err(Error::Usage("zonal_evaluate needs a zonal spectrum".into()));
    };
    let mut vals = Vec::new();
    zonal_values(lmax, theta.cos(), &mut vals);
    Ok(spec
        .coefficients
        .iter()
        .zip(&vals)
        .map(|(c, v)| c * v)
        .sum())
}

// ---------------------------------------------------------------- norms

fn so_exponent(spec: &SphereSpectrum, params: &GroupParams) -> Result<f64> {
    if params.field != FieldTag::Real {
        return Err(Error::Unsupported(format!(
            "sphere-spectral W₀ norms are implemented for SO₀(n,1) only, not {}",
            params.label()
        )));
    }
    if params.sphere_dim() != spec.basis.sphere_dim() {
        return Err(Error::Usage(format!(
            "{} acts on S^{}, the spectrum lives on S^{}",
            params.label(),
            params.sphere_dim(),
            spec.basis.sphere_dim()
        )));
    }
    Ok((params.n as f64 - 1.0) / 2.0)
}

/// `‖Δ^{(n−1)/4} φ‖_{L²}`, which ignores constants.
pub fn w0_norm_sphere(phi: &SphereSpectrum, params: &GroupParams) -> Result<f64> {
    let e = so_exponent(phi, params)?;
    Ok(phi.homogeneous_norm(e))
}

/// Dual norm of a zero-mass density: `(Σ_{λ>0} |μ̂|² λ^{−(n−1)/2})^{1/2}`.
pub fn dual_norm_w(mu: &SphereSpectrum, params: &GroupParams) -> Result<f64> {
    dual_norm_w_tol(mu, params, ZERO_MASS_TOL)
}

/// [`dual_norm_w`] with an explicit tolerance on the zero mode.
pub fn dual_norm_w_tol(mu: &SphereSpectrum, params: &GroupParams, tol: f64) -> Result<f64> {
    let e = so_exponent(mu, params)?;
    let mass = mu.zero_mode().norm();
    if mass > tol {
        return Err(Error::Domain(format!(
            "density has total mass {mass:.3e}, expected 0"
        )));
    }
    Ok(mu.homogeneous_norm(-e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_spectrum(basis: SphereBasis, rng: &mut ChaCha8Rng) -> SphereSpectrum {
        SphereSpectrum {
            basis,
            coefficients: (0..basis.len())
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect(),
        }
    }

    #[test]
    fn circle_single_mode_and_constant() {
        let n = 64;
        let th = circle_nodes(n);
        let samples: Vec<Complex64> = th
            .iter()
            .map(|t| Complex64::from_polar(1.0, 3.0 * t))
            .collect();
        let s = circle_transform(&samples, 10).unwrap();
        for m in -10..=10 {
            let expect = if m == 3 { 1.0 } else { 0.0 };
            assert!((s.circle_mode(m) - expect).norm() < 1e-12);
        }
        let c = circle_transform_real(&vec![2.5; n], 5).unwrap();
        assert!((c.zero_mode().re - 2.5).abs() < 1e-14);
        assert!(c
            .coefficients
            .iter()
            .enumerate()
            .all(|(i, v)| i == 5 || v.norm() < 1e-14));
        assert!(matches!(
            circle_transform(&samples, 32),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn circle_round_trip_and_parseval() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let spec = random_spectrum(SphereBasis::Circle { band: 12 }, &mut rng);
        let samples = circle_inverse(&spec, 40).unwrap();
        let back = circle_transform(&samples, 12).unwrap();
        assert!(back.max_diff(&spec) < 1e-12);
        let l2 = samples.iter().map(|v| v.norm_sqr()).sum::<f64>() / 40.0;
        assert!((l2 - spec.norm_sqr()).abs() < 1e-10 * l2);
    }

    #[test]
    fn legendre_orthonormality() {
        let lmax = 12;
        let grid = S2Grid::for_band(lmax);
        let pts = grid.points();
        let modes: Vec<(usize, isize)> = (0..=lmax)
            .flat_map(|l| (-(l as isize)..=l as isize).map(move |k| (l, k)))
            .collect();
        let vals: Vec<Vec<f64>> = modes
            .iter()
            .map(|&(l, k)| pts.iter().map(|p| real_harmonic(l, k, *p)).collect())
            .collect();
        for a in (0..modes.len()).step_by(7) {
            for b in (0..modes.len()).step_by(5) {
                let mut s = 0.0;
                for i in 0..grid.nlat {
                    for j in 0..grid.nlon {
                        let idx = i * grid.nlon + j;
                        s += grid.weight(i) * vals[a][idx] * vals[b][idx];
                    }
                }
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!(
                    (s - expect).abs() < 1e-12,
                    "{:?} {:?} {s}",
                    modes[a],
                    modes[b]
                );
            }
        }
    }

    #[test]
    fn harmonic_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let lmax = 16;
        let spec = random_spectrum(SphereBasis::Harmonics { lmax }, &mut rng);
        let grid = S2Grid::for_band(lmax);
        let samples = harmonic_inverse(&spec, &grid).unwrap();
        let back = harmonic_transform(&grid, &samples, lmax).unwrap();
        assert!(back.max_diff(&spec) < 1e-10);
        let l2: f64 = (0..grid.nlat)
            .flat_map(|i| (0..grid.nlon).map(move |j| (i, j)))
            .map(|(i, j)| grid.weight(i) * samples[i * grid.nlon + j].norm_sqr())
            .sum();
        assert!((l2 - spec.norm_sqr()).abs() < 1e-8 * l2);
        // A single harmonic picks out its own slot.
        let pts = grid.points();
        let y: Vec<Complex64> = pts
            .iter()
            .map(|p| Complex64::new(real_harmonic(5, -3, *p), 0.0))
            .collect();
        let s = harmonic_transform(&grid, &y, lmax).unwrap();
        for (i, c) in s.coefficients.iter().enumerate() {
            let expect = if i == 25 + 5 - 3 { 1.0 } else { 0.0 };
            assert!((c - expect).norm() < 1e-12);
        }
    }

    #[test]
    fn zonal_matches_harmonic_m0() {
        let lmax = 30;
        let f = |t: f64| (2.0 * t.cos()).exp();
        let z = zonal_transform(f, lmax, &zonal_rule(lmax, 0.5));
        let grid = S2Grid::for_band(lmax + 20);
        let samples: Vec<Complex64> = grid
            .points()
            .iter()
            .map(|p| Complex64::new((2.0 * p[2]).exp(), 0.0))
            .collect();
        let h = harmonic_transform(&grid, &samples, lmax).unwrap();
        for l in 0..=lmax {
            assert!((z.coefficients[l] - h.coefficients[l * l + l]).norm() < 1e-12);
        }
        let back = zonal_evaluate(&z, 0.7).unwrap();
        assert!((back.re - f(0.7)).abs() < 1e-10);
    }

    #[test]
    fn w0_and_dual_norms() {
        let so2 = GroupParams::so(2);
        let so3 = GroupParams::so(3);
        let mut s = SphereSpectrum::zeros(SphereBasis::Circle { band: 8 });
        assert_eq!(w0_norm_sphere(&s, &so2).unwrap(), 0.0);
        assert_eq!(dual_norm_w(&s, &so2).unwrap(), 0.0);
        s.coefficients[8 + 5] = Complex64::new(1.0, 0.0);
        assert!((w0_norm_sphere(&s, &so2).unwrap() - 5f64.sqrt()).abs() < 1e-14);
        assert!((dual_norm_w(&s, &so2).unwrap() - 5f64.powf(-0.5)).abs() < 1e-14);
        s.coefficients[8] = Complex64::new(3.0, 0.0);
        assert!((w0_norm_sphere(&s, &so2).unwrap() - 5f64.sqrt()).abs() < 1e-14);
        assert!(matches!(dual_norm_w(&s, &so2), Err(Error::Domain(_))));

        let mut h = SphereSpectrum::zeros(SphereBasis::Harmonics { lmax: 3 });
        h.coefficients[2] = Complex64::new(1.0, 0.0);
        assert!((w0_norm_sphere(&h, &so3).unwrap() - 2f64.sqrt()).abs() < 1e-14);
        assert!(matches!(w0_norm_sphere(&h, &so2), Err(Error::Usage(_))));
        assert!(matches!(
            w0_norm_sphere(&h, &GroupParams::su(2)),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn duality_is_saturated_by_the_extremizer() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = GroupParams::so(2);
        let basis = SphereBasis::Circle { band: 10 };
        let mut mu = random_spectrum(basis, &mut rng);
        mu.coefficients[10] = Complex64::new(0.0, 0.0);
        let dual = dual_norm_w(&mu, &p).unwrap();
        let mut best: f64 = 0.0;
        let mut candidates: Vec<SphereSpectrum> =
            (0..100).map(|_| random_spectrum(basis, &mut rng)).collect();
        let mut ext = mu.clone();
        for (i, c) in ext.coefficients.iter_mut().enumerate() {
            if i != 10 {
                *c /= basis.eigenvalue(i).sqrt();
            }
        }
        candidates.push(ext);
        for phi in &candidates {
            let pair = mu.pairing(phi).unwrap().norm();
            let w = w0_norm_sphere(phi, &p).unwrap();
            assert!(pair <= dual * w * (1.0 + 1e-12));
            best = best.max(pair / w);
        }
        assert!(best >= 0.999 * dual);
    }
}
