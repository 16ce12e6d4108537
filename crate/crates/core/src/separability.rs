//! Two-particle separability diagnostics: the separable potential
//! V_sp = sum_{k != i,j} [v_ik(R_k) + v_jk(R_k)] evaluated at the pair's
//! mass-weighted center c, the expansion of v_ik + v_jk in the pair
//! separation r (distinct and identical particles), and residual-scaling
//! fits that identify the controlling length: r_rho = min_k R_k for
//! power-law tails, the range beta_Y for Yukawa-type pair-spectator forces.
//!
//! Conventions: pair vector r = r_j - r_i, so r_i = c - (m_j/M) r and
//! r_j = c + (m_i/M) r; R_k = r_k - c; gamma_k is the angle between r and
//! R_k. With a = m_j/M, b = m_i/M the general second order is
//! r^2 [a^2 S_ik + b^2 S_jk], S = v'(1 - P1^2)/(2R) + v'' P1^2/2, which
//! reduces to the identical-particle form
//! (1/12) r^2 [v'' + 2v'/R] + (1/6) r^2 [v'' - v'/R] P2.

use crate::potential::PotentialModel;
use crate::specialfn::legendre;
use crate::{Error, Result};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Minimal 3-vector for particle positions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }

    pub fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }

    pub fn scale(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }
}

/// A pair interaction entry; (a, b) is order-insensitive.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairPotential {
    pub a: usize,
    pub b: usize,
    pub model: PotentialModel,
}

/// An N >= 3 particle configuration with a distinguished pair (i, j).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ParticleConfig {
    pub masses: Vec<f64>,
    pub positions: Vec<Vec3>,
    pub pair: (usize, usize),
    pub pair_potentials: Vec<PairPotential>,
}

/// All pieces of one separability evaluation.
#[derive(Debug, Clone)]
pub struct SeparabilityReport {
    pub v_full: f64,
    pub v_sp: f64,
    /// v_full - v_sp, exactly.
    pub residual: f64,
    pub first_order_pred: f64,
    pub second_order_pred: f64,
    /// r |v'(r_rho)| / |v(r_rho)| for the nearest spectator.
    pub small_param: f64,
    /// min_k R_k: the nearest-spectator distance controlling the expansion.
    pub r_rho: f64,
}

#[derive(Debug, Clone)]
pub struct ScalingFit {
    /// Fitted exponent of |residual| ~ prefactor * r^slope.
    pub slope: f64,
    pub prefactor: f64,
    /// Prefactors implied by the expansion terms (per unit r and r^2).
    pub first_order_prefactor: f64,
    pub second_order_prefactor: f64,
}

impl ParticleConfig {
    pub fn validate(&self) -> Result<()> {
        let n = self.masses.len();
        if n < 3 || self.positions.len() != n {
            return Err(Error::Invalid(format!(
                "need N >= 3 particles with matching masses/positions, got {n}/{}",
                self.positions.len()
            )));
        }
        if self.masses.iter().any(|&m| !(m > 0.0)) {
            return Err(Error::Invalid("masses must be positive".into()));
        }
        let (i, j) = self.pair;
        if i >= n || j >= n || i == j {
            return Err(Error::Invalid(format!("bad pair indices ({i}, {j})")));
        }
        for p in 0..n {
            for q in p + 1..n {
                if self.positions[p].sub(self.positions[q]).norm() == 0.0 {
                    return Err(Error::CoincidentParticles(format!(
                        "particles {p} and {q}"
                    )));
                }
            }
        }
        for k in 0..n {
            if k == i || k == j {
                continue;
            }
            for &p in &[i, j] {
                if self.potential(p, k).is_none() {
                    return Err(Error::Invalid(format!(
                        "missing pair potential ({p}, {k})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn potential(&self, a: usize, b: usize) -> Option<&PotentialModel> {
        self.pair_potentials
            .iter()
            .find(|e| (e.a, e.b) == (a, b) || (e.a, e.b) == (b, a))
            .map(|e| &e.model)
    }

    /// Mass-weighted center of the distinguished pair.
    pub fn pair_center(&self) -> Vec3 {
        let (i, j) = self.pair;
        let (mi, mj) = (self.masses[i], self.masses[j]);
        self.positions[i]
            .scale(mi / (mi + mj))
            .add(self.positions[j].scale(mj / (mi + mj)))
    }

    /// Pair separation vector r_j - r_i.
    pub fn pair_vector(&self) -> Vec3 {
        let (i, j) = self.pair;
        self.positions[j].sub(self.positions[i])
    }

    /// Same spectators and center, pair separation rescaled to length r.
    pub fn with_separation(&self, r: f64) -> Result<ParticleConfig> {
        let rv = self.pair_vector();
        let len = rv.norm();
        if len == 0.0 {
            return Err(Error::CoincidentParticles("pair".into()));
        }
        let u = rv.scale(1.0 / len);
        let c = self.pair_center();
        let (i, j) = self.pair;
        let m = self.masses[i] + self.masses[j];
        let mut out = self.clone();
        out.positions[i] = c.sub(u.scale(r * self.masses[j] / m));
        out.positions[j] = c.add(u.scale(r * self.masses[i] / m));
        Ok(out)
    }
}

/// (v, v', v'') at R; analytic for power/Yukawa parts, 5-point stencil on the
/// spline for tabulated parts (two edge knots excluded).
pub fn potential_derivatives(model: &PotentialModel, radius: f64) -> Result<(f64, f64, f64)> {
    if !(radius > 0.0) {
        return Err(Error::Domain(format!("derivatives need R > 0, got {radius}")));
    }
    let mut v = 0.0;
    let mut dv = 0.0;
    let mut d2v = 0.0;
    for t in &model.terms {
        let p = t.strength * radius.powf(-t.exponent);
        v += p;
        dv += -t.exponent / radius * p;
        d2v += t.exponent * (t.exponent + 1.0) / (radius * radius) * p;
    }
    if let Some(y) = &model.yukawa {
        let p = y.strength * (-radius / y.range).exp() / radius;
        let ib = 1.0 / y.range;
        let ir = 1.0 / radius;
        v += p;
        dv += -p * (ib + ir);
        d2v += p * (ib * ib + 2.0 * ib * ir + 2.0 * ir * ir);
    }
    if let Some(table) = &model.tabulated {
        let n = table.r.len();
        let lo = table.r[2.min(n - 1)];
        let hi = table.r[n.saturating_sub(3)];
        let h = 0.25
            * (table.r[n - 1] - table.r[0])
            / (n as f64 - 1.0);
        if radius - 2.0 * h < lo || radius + 2.0 * h > hi {
            return Err(Error::DifferentiationFailure(format!(
                "R = {radius} within two knots of the table edge"
            )));
        }
        let f = |x: f64| table.interpolate(x);
        let (fm2, fm1, f0, fp1, fp2) = (
            f(radius - 2.0 * h)?,
            f(radius - h)?,
            f(radius)?,
            f(radius + h)?,
            f(radius + 2.0 * h)?,
        );
        v += f0;
        dv += (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h);
        d2v += (-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * h * h);
    }
    Ok((v, dv, d2v))
}

/// Full pair-spectator potential sum over k != i, j at the actual positions.
pub fn full_potential(config: &ParticleConfig) -> Result<f64> {
    config.validate()?;
    let (i, j) = config.pair;
    let mut total = 0.0;
    for k in 0..config.masses.len() {
        if k == i || k == j {
            continue;
        }
        for &p in &[i, j] {
            let d = config.positions[p].sub(config.positions[k]).norm();
            total += config.potential(p, k).unwrap().evaluate(d)?;
        }
    }
    Ok(total)
}

/// Separable potential: spectators seen from the pair center c.
pub fn separable_potential(config: &ParticleConfig) -> Result<f64> {
    config.validate()?;
    let (i, j) = config.pair;
    let c = config.pair_center();
    let mut total = 0.0;
    for k in 0..config.masses.len() {
        if k == i || k == j {
            continue;
        }
        let rk = config.positions[k].sub(c).norm();
        total += config.potential(i, k).unwrap().evaluate(rk)?;
        total += config.potential(j, k).unwrap().evaluate(rk)?;
    }
    Ok(total)
}

/// Expansion of v_ik + v_jk around the pair center through second order in r.
/// `masses` is (m_i, m_j); `gamma` the angle between the pair vector and R_k.
pub fn expansion_terms(
    v_ik: &PotentialModel,
    v_jk: &PotentialModel,
    masses: (f64, f64),
    radius: f64,
    r: f64,
    gamma: f64,
) -> Result<(f64, f64, f64)> {
    if !(radius > r) {
        return Err(Error::Domain(format!(
            "expansion needs R > r, got R = {radius}, r = {r}"
        )));
    }
    let (mi, mj) = masses;
    let m = mi + mj;
    let p1 = legendre(1, gamma.cos())?;
    let p2 = legendre(2, gamma.cos())?;
    let (vi, dvi, d2vi) = potential_derivatives(v_ik, radius)?;
    let (vj, dvj, d2vj) = potential_derivatives(v_jk, radius)?;

    let zeroth = vi + vj;
    let first = (mj * dvi - mi * dvj) / m * r * p1;

    let identical = mi == mj && (dvi, d2vi) == (dvj, d2vj) && vi == vj;
    let second = if identical {
        r * r / 12.0 * (d2vi + 2.0 * dvi / radius)
            + r * r / 6.0 * (d2vi - dvi / radius) * p2
    } else {
        let s = |dv: f64, d2v: f64| {
            dv * (1.0 - p1 * p1) / (2.0 * radius) + 0.5 * d2v * p1 * p1
        };
        let (a, b) = (mj / m, mi / m);
        r * r * (a * a * s(dvi, d2vi) + b * b * s(dvj, d2vj))
    };
    Ok((zeroth, first, second))
}

/// r |v'(R)| / |v(R)|: the dimensionless expansion parameter (|n| r/R for a
/// power tail, r (1/beta_Y + 1/R) for Yukawa).
pub fn small_parameter(model: &PotentialModel, r: f64, radius: f64) -> Result<f64> {
    let (v, dv, _) = potential_derivatives(model, radius)?;
    if v == 0.0 {
        return Err(Error::Domain(format!("v({radius}) = 0; parameter undefined")));
    }
    Ok(r * dv.abs() / v.abs())
}

/// Assemble a full report for a configuration.
pub fn report(config: &ParticleConfig) -> Result<SeparabilityReport> {
    config.validate()?;
    let (i, j) = config.pair;
    let v_full = full_potential(config)?;
    let v_sp = separable_potential(config)?;
    let c = config.pair_center();
    let rv = config.pair_vector();
    let r = rv.norm();

    let mut first = 0.0;
    let mut second = 0.0;
    let mut r_rho = f64::INFINITY;
    let mut nearest = usize::MAX;
    for k in 0..config.masses.len() {
        if k == i || k == j {
            continue;
        }
        let rk_vec = config.positions[k].sub(c);
        let rk = rk_vec.norm();
        if rk < r_rho {
            r_rho = rk;
            nearest = k;
        }
        let cosg = (rv.dot(rk_vec) / (r * rk)).clamp(-1.0, 1.0);
        let (_, f1, f2) = expansion_terms(
            config.potential(i, k).unwrap(),
            config.potential(j, k).unwrap(),
            (config.masses[i], config.masses[j]),
            rk,
            r,
            cosg.acos(),
        )?;
        first += f1;
        second += f2;
    }
    let small = small_parameter(config.potential(i, nearest).unwrap(), r, r_rho)?;
    Ok(SeparabilityReport {
        v_full,
        v_sp,
        residual: v_full - v_sp,
        first_order_pred: first,
        second_order_pred: second,
        small_param: small,
        r_rho,
    })
}

/// Fit |V_full - V_sp| ~ prefactor r^slope over `r_sweep` (the pair is
/// rescaled about its center along its current direction).
pub fn residual_scaling_fit(config: &ParticleConfig, r_sweep: &[f64]) -> Result<ScalingFit> {
    if r_sweep.len() < 4 {
        return Err(Error::Invalid("need at least 4 sweep radii".into()));
    }
    let mut xs = Vec::with_capacity(r_sweep.len());
    let mut ys = Vec::with_capacity(r_sweep.len());
    let mut rep0 = None;
    for &r in r_sweep {
        let cfg = config.with_separation(r)?;
        let rep = report(&cfg)?;
        if rep.residual.abs() < 1e-14 {
            return Err(Error::FitDegenerate(format!(
                "residual {} below floor at r = {r}",
                rep.residual
            )));
        }
        xs.push(r.ln());
        ys.push(rep.residual.abs().ln());
        if rep0.is_none() {
            rep0 = Some((r, rep));
        }
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if den == 0.0 {
        return Err(Error::FitDegenerate("sweep radii coincide".into()));
    }
    let slope = num / den;
    let prefactor = (my - slope * mx).exp();
    let (r0, rep) = rep0.unwrap();
    Ok(ScalingFit {
        slope,
        prefactor,
        first_order_prefactor: (rep.first_order_pred / r0).abs(),
        second_order_prefactor: (rep.second_order_pred / (r0 * r0)).abs(),
    })
}

/// Shape-collapse metric between two configurations swept over the scaled
/// separation s (r = s * scale): each |residual| curve is normalized by its
/// value at the last s, and the mean |log10| ratio of the normalized curves
/// is returned. Curves bend on the scale of the potential's own range, so
/// the metric is small only when `scale` is the controlling length.
pub fn collapse_metric(
    cfg_a: &ParticleConfig,
    cfg_b: &ParticleConfig,
    s_values: &[f64],
    scale_a: f64,
    scale_b: f64,
) -> Result<f64> {
    if s_values.len() < 3 {
        return Err(Error::Invalid("need at least 3 scaled separations".into()));
    }
    let curve = |cfg: &ParticleConfig, scale: f64| -> Result<Vec<f64>> {
        let mut vals = Vec::with_capacity(s_values.len());
        for &s in s_values {
            let rep = report(&cfg.with_separation(s * scale)?)?;
            if rep.residual.abs() < 1e-300 {
                return Err(Error::FitDegenerate("vanishing residual".into()));
            }
            vals.push(rep.residual.abs());
        }
        let last = vals[vals.len() - 1];
        Ok(vals.into_iter().map(|v| v / last).collect())
    };
    let ca = curve(cfg_a, scale_a)?;
    let cb = curve(cfg_b, scale_b)?;
    let mut acc = 0.0;
    for (a, b) in ca.iter().zip(&cb) {
        acc += (a / b).log10().abs();
    }
    Ok(acc / s_values.len() as f64)
}

/// Monte-Carlo mean nearest-spectator distance in a homogeneous gas of
/// density rho, bias-corrected by Gamma(4/3) so it estimates
/// (4 pi rho / 3)^{-1/3}. Reproducible for a fixed seed.
pub fn nearest_spectator_estimate(rho: f64, samples: usize, seed: u64) -> Result<f64> {
    if !(rho > 0.0) || samples == 0 {
        return Err(Error::Invalid("need rho > 0 and samples > 0".into()));
    }
    // box big enough that the boundary never hosts the nearest neighbour
    let scale = (4.0 * std::f64::consts::PI * rho / 3.0).powf(-1.0 / 3.0);
    let half = 6.0 * scale;
    let n_points = ((rho * (2.0 * half).powi(3)).round() as usize).max(8);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gamma_4_3 = 0.892_979_511_569_249_2;
    let mut acc = 0.0;
    for _ in 0..samples {
        let mut best = f64::INFINITY;
        for _ in 0..n_points {
            let p = Vec3::new(
                rng.gen_range(-half..half),
                rng.gen_range(-half..half),
                rng.gen_range(-half..half),
            );
            best = best.min(p.norm());
        }
        acc += best;
    }
    Ok(acc / samples as f64 / gamma_4_3)
}
