//! Cusp functions f^cp, strict cusp functions F^cp, and irregular companions
//! g^cp for the free, generalized-Coulomb, charge-dipole, and repulsive
//! singular-tail classes.
//!
//! Conventions: r is in user units, r_s = r / beta_alpha; every pair (f, g)
//! is normalized so that the Wronskian in the scaled radius equals 2/pi.
//! Derivatives are analytic (Bessel recurrences), never finite differences.

use crate::potential::{cusp_order, gc_normalization, transformed_l, ClassTag, ShortRangeClass};
use crate::specialfn::{
    analytic_i, analytic_i_deriv, bessel_ik_scaled, bessel_jy, gamma, ln_gamma,
};
use crate::{Error, Result};
use std::f64::consts::PI;

/// Log-magnitude below which values switch to the scaled representation.
const UNDERFLOW_LN: f64 = -644.0; // ln(1e-280) ~ -644.7

/// A cusp-function value with derivative in r. When `underflow_scaled` is
/// set, the true value is `f * exp(log_offset)` (same offset for `df`);
/// otherwise `log_offset` is zero and `f`, `df` are the plain values.
#[derive(Debug, Clone, Copy)]
pub struct CuspValue {
    pub f: f64,
    pub df: f64,
    pub log_offset: f64,
    pub underflow_scaled: bool,
}

impl CuspValue {
    fn plain(f: f64, df: f64) -> Self {
        CuspValue {
            f,
            df,
            log_offset: 0.0,
            underflow_scaled: false,
        }
    }

    /// Build from a scaled mantissa pair, unscaling when representable.
    fn from_scaled(fm: f64, dfm: f64, offset: f64) -> Self {
        if fm == 0.0 || fm.abs().ln() + offset > UNDERFLOW_LN {
            let s = offset.exp();
            CuspValue::plain(fm * s, dfm * s)
        } else {
            CuspValue {
                f: fm,
                df: dfm,
                log_offset: offset,
                underflow_scaled: true,
            }
        }
    }

    /// Plain value; underflows to 0 when the offset is too negative.
    pub fn value(&self) -> f64 {
        self.f * self.log_offset.exp()
    }

    /// Plain derivative with the same caveat.
    pub fn deriv(&self) -> f64 {
        self.df * self.log_offset.exp()
    }

    /// Logarithmic derivative d(ln f)/dr, independent of the scaling.
    pub fn log_deriv(&self) -> f64 {
        self.df / self.f
    }

    /// ln |f|, exact under scaling.
    pub fn ln_abs(&self) -> f64 {
        self.f.abs().ln() + self.log_offset
    }
}

/// Everything needed to evaluate the cusp functions of one (class, l) pair.
#[derive(Debug, Clone)]
pub struct CuspSpec {
    pub class: ShortRangeClass,
    pub l: u32,
    /// Bessel order 2(l+1/2)/|alpha-2|; zero for F/alCD where unused.
    pub nu0: f64,
    /// Transformed partial wave; equals l except for alCD.
    pub lt: f64,
    pub beta_alpha: Option<f64>,
    /// Free length scale s_L used by the F / combined-GC / alCD forms.
    pub s_l: f64,
    /// GC normalization b_l; 1 where unused.
    pub b_l: f64,
}

impl CuspSpec {
    /// Derive the cusp parameters; `s_l` defaults to 1 when `None`.
    pub fn new(class: &ShortRangeClass, l: u32, s_l: Option<f64>) -> Result<Self> {
        let s_l = s_l.unwrap_or(1.0);
        if !(s_l > 0.0) {
            return Err(Error::Domain(format!("sL must be positive, got {s_l}")));
        }
        let base = CuspSpec {
            class: class.clone(),
            l,
            nu0: 0.0,
            lt: l as f64,
            beta_alpha: class.beta_alpha,
            s_l,
            b_l: 1.0,
        };
        match class.tag {
            ClassTag::F => Ok(base),
            ClassTag::SrGc => Ok(CuspSpec {
                nu0: cusp_order(l as f64, class.dominant_alpha)?,
                b_l: gc_normalization(l, class.dominant_alpha)?,
                ..base
            }),
            ClassTag::SrAlCd => {
                let g2 = class.gamma2.ok_or_else(|| {
                    Error::Invalid("alCD class missing gamma2".into())
                })?;
                if g2 <= -0.25 {
                    return Err(Error::NonphysicalPotential(format!(
                        "gamma2 = {g2} <= -1/4"
                    )));
                }
                Ok(CuspSpec {
                    lt: transformed_l(l, g2)?,
                    ..base
                })
            }
            ClassTag::SrRVdW => Ok(CuspSpec {
                nu0: cusp_order(l as f64, class.dominant_alpha)?,
                ..base
            }),
            ClassTag::SrAlImtS => Err(Error::Invalid(
                "intermediate-singularity class has no single-term cusp function".into(),
            )),
            ClassTag::NonphysicalAVdW | ClassTag::NonphysicalNpCd => Err(
                Error::NonphysicalPotential(format!("{:?} admits no cusp function", class.tag)),
            ),
        }
    }

    fn alpha(&self) -> f64 {
        self.class.dominant_alpha
    }

    fn beta(&self) -> Result<f64> {
        self.beta_alpha
            .ok_or_else(|| Error::Invalid("class carries no length scale".into()))
    }
}

/// Free-class power form at a possibly non-integer effective l:
/// f = (r/sL)^{l+1} / (2^{l+1/2} Gamma(l+3/2)).
fn free_form(l_eff: f64, r: f64, s_l: f64) -> Result<CuspValue> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("r must be positive, got {r}")));
    }
    let ln_f = (l_eff + 1.0) * (r / s_l).ln() - (l_eff + 0.5) * 2.0_f64.ln()
        - ln_gamma(l_eff + 1.5);
    if ln_f > 700.0 {
        return Err(Error::Overflow(format!(
            "free cusp form overflows at r = {r}, l_eff = {l_eff}"
        )));
    }
    let f = ln_f.exp();
    Ok(CuspValue::plain(f, (l_eff + 1.0) / r * f))
}

/// f^cp for the free class.
pub fn cusp_f_free(l: u32, r: f64, s_l: f64) -> Result<CuspValue> {
    free_form(l as f64, r, s_l)
}

/// Combined GC cusp function f^cp(F)(r, sL) * I^a_{nu0}(z) with
/// z = G r^{2-alpha} / (2-alpha)^2, analytic through G = 0.
pub fn cusp_f_gc(spec: &CuspSpec, r: f64, signed_strength: f64) -> Result<CuspValue> {
    let alpha = spec.alpha();
    if !(alpha < 2.0) {
        return Err(Error::Domain(format!(
            "GC cusp requires alpha < 2, got {alpha}"
        )));
    }
    let base = free_form(spec.l as f64, r, spec.s_l)?;
    let two_m_a = 2.0 - alpha;
    let z = signed_strength * r.powf(two_m_a) / (two_m_a * two_m_a);
    let ia = analytic_i(spec.nu0, z)?;
    let dia = analytic_i_deriv(spec.nu0, z)?;
    let dz = signed_strength * r.powf(1.0 - alpha) / two_m_a;
    Ok(CuspValue::plain(
        base.f * ia,
        base.df * ia + base.f * dia * dz,
    ))
}

/// Separated GC form: b_l sqrt(2/(2-alpha)) r_s^{1/2} J_{nu0}(y) for an
/// attractive strength, same with I_{nu0} for repulsive;
/// y = (2/(2-alpha)) r_s^{(2-alpha)/2}. Equals [`cusp_f_gc`] when sL = beta.
pub fn cusp_f_gc_separated(spec: &CuspSpec, r: f64, signed_strength: f64) -> Result<CuspValue> {
    let alpha = spec.alpha();
    let beta = spec.beta()?;
    let rs = r / beta;
    let two_m_a = 2.0 - alpha;
    let y = 2.0 / two_m_a * rs.powf(0.5 * two_m_a);
    let pref = spec.b_l * (2.0 / two_m_a).sqrt();
    let (b, bp) = if signed_strength < 0.0 {
        let (j, jp, _, _) = bessel_jy(spec.nu0, y)?;
        (j, jp)
    } else {
        let (i, ip, _, _) = bessel_ik_scaled(spec.nu0, y)?;
        (i, ip)
    };
    let dy_drs = rs.powf(-0.5 * alpha);
    let f = pref * rs.sqrt() * b;
    let df_drs = pref * (0.5 / rs.sqrt() * b + rs.sqrt() * bp * dy_drs);
    Ok(CuspValue::plain(f, df_drs / beta))
}

/// alCD cusp function: the free form at the transformed l.
pub fn cusp_f_alcd(l: u32, r: f64, gamma2: f64, s_l: f64) -> Result<CuspValue> {
    if gamma2 <= -0.25 {
        return Err(Error::NonphysicalPotential(format!(
            "gamma2 = {gamma2} <= -1/4"
        )));
    }
    free_form(transformed_l(l, gamma2)?, r, s_l)
}

/// rVdW cusp function (2/pi) (alpha-2)^{-1/2} r_s^{1/2} K_{nu0}(y) with
/// y = (2/(alpha-2)) r_s^{-(alpha-2)/2}; exponentially small near the origin,
/// returned in the scaled representation when needed.
pub fn cusp_f_rvdw(spec: &CuspSpec, r: f64) -> Result<CuspValue> {
    let alpha = spec.alpha();
    if !(alpha > 2.0) {
        return Err(Error::Domain(format!(
            "rVdW cusp requires alpha > 2, got {alpha}"
        )));
    }
    let beta = spec.beta()?;
    let rs = r / beta;
    let am2 = alpha - 2.0;
    let y = 2.0 / am2 * rs.powf(-0.5 * am2);
    let (_, _, ks, kps) = bessel_ik_scaled(spec.nu0, y)?;
    let pref = 2.0 / PI / am2.sqrt();
    let dy_drs = -rs.powf(-0.5 * alpha);
    let fm = pref * rs.sqrt() * ks;
    let dfm = pref * (0.5 / rs.sqrt() * ks + rs.sqrt() * kps * dy_drs) / beta;
    Ok(CuspValue::from_scaled(fm, dfm, -y))
}

/// f^cp dispatched by class.
pub fn cusp_f(spec: &CuspSpec, r: f64) -> Result<CuspValue> {
    match spec.class.tag {
        ClassTag::F => cusp_f_free(spec.l, r, spec.s_l),
        ClassTag::SrGc => cusp_f_gc_separated(spec, r, spec.class.dominant_strength),
        ClassTag::SrAlCd => free_form(spec.lt, r, spec.s_l),
        ClassTag::SrRVdW => cusp_f_rvdw(spec, r),
        _ => Err(Error::Invalid(format!(
            "no cusp function for {:?}",
            spec.class.tag
        ))),
    }
}

/// Strict cusp function F^cp: the class-independent r -> 0 limit. F and GC
/// share the free power form; alCD uses it at l_t; rVdW has the
/// l-independent H^cp = pi^{-1/2} r_s^{alpha/4} exp(-(2/(alpha-2)) r_s^{-(alpha-2)/2}).
pub fn strict_cusp(spec: &CuspSpec, r: f64) -> Result<CuspValue> {
    match spec.class.tag {
        ClassTag::F | ClassTag::SrGc => free_form(spec.l as f64, r, spec.s_l),
        ClassTag::SrAlCd => free_form(spec.lt, r, spec.s_l),
        ClassTag::SrRVdW => {
            let alpha = spec.alpha();
            let beta = spec.beta()?;
            let rs = r / beta;
            let am2 = alpha - 2.0;
            let y = 2.0 / am2 * rs.powf(-0.5 * am2);
            let hm = rs.powf(0.25 * alpha) / PI.sqrt();
            // d ln H / d r_s = alpha/(4 r_s) + r_s^{-alpha/2}
            let dlog = 0.25 * alpha / rs + rs.powf(-0.5 * alpha);
            Ok(CuspValue::from_scaled(hm, hm * dlog / beta, -y))
        }
        _ => Err(Error::Invalid(format!(
            "no strict cusp function for {:?}",
            spec.class.tag
        ))),
    }
}

/// Irregular companion g^cp, normalized so W_{r_s}(f, g) = 2/pi.
pub fn irregular_g(spec: &CuspSpec, r: f64) -> Result<CuspValue> {
    match spec.class.tag {
        ClassTag::F => irregular_power(spec.l as f64, r, spec.s_l),
        ClassTag::SrAlCd => irregular_power(spec.lt, r, spec.s_l),
        ClassTag::SrGc => {
            let alpha = spec.alpha();
            let beta = spec.beta()?;
            let rs = r / beta;
            let two_m_a = 2.0 - alpha;
            let y = 2.0 / two_m_a * rs.powf(0.5 * two_m_a);
            let dy_drs = rs.powf(-0.5 * alpha);
            let (pref, b, bp) = if spec.class.dominant_strength < 0.0 {
                // attractive: Y-Bessel companion
                let (_, _, yv, yp) = bessel_jy(spec.nu0, y)?;
                ((2.0 / two_m_a).sqrt() / spec.b_l, yv, yp)
            } else {
                // repulsive: -(2/pi) K companion
                let (_, _, ks, kps) = bessel_ik_scaled(spec.nu0, y)?;
                let e = (-y).exp();
                (
                    -(2.0 / PI) * (2.0 / two_m_a).sqrt() / spec.b_l,
                    ks * e,
                    kps * e,
                )
            };
            let g = pref * rs.sqrt() * b;
            let dg = pref * (0.5 / rs.sqrt() * b + rs.sqrt() * bp * dy_drs) / beta;
            Ok(CuspValue::plain(g, dg))
        }
        ClassTag::SrRVdW => {
            let alpha = spec.alpha();
            let beta = spec.beta()?;
            let rs = r / beta;
            let am2 = alpha - 2.0;
            let y = 2.0 / am2 * rs.powf(-0.5 * am2);
            if y > 700.0 {
                return Err(Error::Overflow(format!(
                    "rVdW irregular companion overflows at r_s = {rs} (y = {y:.1})"
                )));
            }
            // (I_nu + I_{-nu})/2 = I_nu + sin(nu pi)/pi K_nu, same for d/dy
            let (i, ip, ks, kps) = bessel_ik_scaled(spec.nu0, y)?;
            let e = (-y).exp();
            let s = (spec.nu0 * PI).sin() / PI;
            let b = i + s * ks * e;
            let bp = ip + s * kps * e;
            let pref = -2.0 / am2.sqrt();
            let dy_drs = -rs.powf(-0.5 * alpha);
            let g = pref * rs.sqrt() * b;
            let dg = pref * (0.5 / rs.sqrt() * b + rs.sqrt() * bp * dy_drs) / beta;
            Ok(CuspValue::plain(g, dg))
        }
        _ => Err(Error::CompanionUnavailable(format!(
            "{:?} has no irregular companion",
            spec.class.tag
        ))),
    }
}

/// F-class (and alCD at l_t) irregular power form:
/// g = -(2^{l+1/2} Gamma(l+1/2) / pi) (r/sL)^{-l}.
fn irregular_power(l_eff: f64, r: f64, s_l: f64) -> Result<CuspValue> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("r must be positive, got {r}")));
    }
    let c = 2.0_f64.powf(l_eff + 0.5) * gamma(l_eff + 0.5)? / PI;
    let g = -c * (r / s_l).powf(-l_eff);
    Ok(CuspValue::plain(g, -l_eff / r * g))
}

/// W_{r_s}(f^cp, g^cp) at r; equals 2/pi for every class by construction.
/// The scaled radius is r/beta for GC and rVdW, r/sL for F and alCD.
pub fn wronskian_check(spec: &CuspSpec, r: f64) -> Result<f64> {
    let f = cusp_f(spec, r)?;
    let g = irregular_g(spec, r)?;
    let scale = match spec.class.tag {
        ClassTag::F | ClassTag::SrAlCd => spec.s_l,
        _ => spec.beta()?,
    };
    let w = f.f * g.df - f.df * g.f;
    Ok(w * (f.log_offset + g.log_offset).exp() * scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::{PotentialModel, PowerTerm};
    use approx::assert_relative_eq;

    fn class_of(strength: f64, exponent: f64) -> ShortRangeClass {
        PotentialModel::from_terms(vec![PowerTerm { strength, exponent }])
            .unwrap()
            .classify()
            .unwrap()
    }

    fn spec_of(strength: f64, exponent: f64, l: u32) -> CuspSpec {
        CuspSpec::new(&class_of(strength, exponent), l, None).unwrap()
    }

    #[test]
    fn free_examples() {
        assert_relative_eq!(
            cusp_f_free(0, 1.0, 1.0).unwrap().f,
            0.797_884_6,
            max_relative = 1e-6
        );
        assert_relative_eq!(
            cusp_f_free(1, 1.0, 1.0).unwrap().f,
            0.265_961_5,
            max_relative = 1e-6
        );
        assert_relative_eq!(
            cusp_f_free(0, 2.0, 2.0).unwrap().f,
            0.797_884_6,
            max_relative = 1e-6
        );
    }

    #[test]
    fn gc_examples() {
        // hydrogen-like: alpha = 1, G = -2, beta = 0.5
        let class = class_of(-2.0, 1.0);
        assert_relative_eq!(class.beta_alpha.unwrap(), 0.5);
        let spec = CuspSpec::new(&class, 0, Some(0.5)).unwrap();
        assert_relative_eq!(spec.b_l, 0.564_189_6, max_relative = 1e-6);
        let combined = cusp_f_gc(&spec, 0.5, -2.0).unwrap();
        assert_relative_eq!(combined.f, 0.460_159_8, max_relative = 1e-6);
        let separated = cusp_f_gc_separated(&spec, 0.5, -2.0).unwrap();
        assert_relative_eq!(separated.f, combined.f, max_relative = 1e-10);
        // zero strength reduces to the free form
        let free = cusp_f_free(0, 0.7, 0.5).unwrap();
        let zero = cusp_f_gc(&spec, 0.7, 0.0).unwrap();
        assert_relative_eq!(zero.f, free.f, max_relative = 1e-12);
        assert_relative_eq!(zero.df, free.df, max_relative = 1e-12);
    }

    #[test]
    fn gc_combined_matches_separated() {
        for &(g, a) in &[(-2.0, 1.0), (3.0, 1.0), (-0.7, 0.5), (1.3, 1.5), (-1.0, -1.0)] {
            let class = class_of(g, a);
            let beta = class.beta_alpha.unwrap();
            for l in 0..3u32 {
                let spec = CuspSpec::new(&class, l, Some(beta)).unwrap();
                for &rs in &[1e-3, 0.03, 0.4, 1.0, 3.7, 10.0] {
                    let r = rs * beta;
                    let c = cusp_f_gc(&spec, r, g).unwrap();
                    let s = cusp_f_gc_separated(&spec, r, g).unwrap();
                    assert_relative_eq!(c.f, s.f, max_relative = 1e-10);
                    assert_relative_eq!(c.df, s.df, max_relative = 1e-9);
                }
            }
        }
    }

    #[test]
    fn alcd_examples() {
        assert_relative_eq!(
            cusp_f_alcd(0, 1.0, 0.0, 1.0).unwrap().f,
            0.797_884_6,
            max_relative = 1e-6
        );
        assert_relative_eq!(
            cusp_f_alcd(0, 1.0, 2.0, 1.0).unwrap().f,
            0.265_961_5,
            max_relative = 1e-6
        );
        assert_relative_eq!(
            cusp_f_alcd(0, 0.5, 2.0, 1.0).unwrap().f,
            0.066_490_4,
            max_relative = 1e-5
        );
        assert!(cusp_f_alcd(0, 1.0, -0.3, 1.0).is_err());
    }

    #[test]
    fn rvdw_examples() {
        // alpha = 4: K_{1/2} closed form gives f = r_s e^{-1/r_s} / sqrt(pi)
        let spec = spec_of(1.0, 4.0, 0);
        let f1 = cusp_f_rvdw(&spec, 1.0).unwrap();
        assert_relative_eq!(f1.value(), 0.207_553_7, max_relative = 1e-6);
        let f2 = cusp_f_rvdw(&spec, 0.25).unwrap();
        assert_relative_eq!(f2.value(), 0.002_583_37, max_relative = 1e-5);
        // strict form equals the cusp function exactly at alpha = 4
        for &rs in &[0.05, 0.2, 1.0, 3.0] {
            let a = cusp_f_rvdw(&spec, rs).unwrap();
            let b = strict_cusp(&spec, rs).unwrap();
            assert_relative_eq!(a.ln_abs(), b.ln_abs(), max_relative = 1e-10);
            assert_relative_eq!(a.log_deriv(), b.log_deriv(), max_relative = 1e-9);
        }
        // alpha = 6 monotone growth in r_s
        let spec6 = spec_of(1.0, 6.0, 0);
        let mut prev = 0.0;
        for k in 1..=30 {
            let v = cusp_f_rvdw(&spec6, 0.3 * k as f64).unwrap().value();
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn strict_examples() {
        let class = class_of(-2.0, 1.0);
        let spec = CuspSpec::new(&class, 0, Some(1.0)).unwrap();
        assert_relative_eq!(
            strict_cusp(&spec, 0.01).unwrap().f,
            0.007_978_8,
            max_relative = 1e-4
        );
        let spec6 = spec_of(1.0, 6.0, 0);
        assert_relative_eq!(
            strict_cusp(&spec6, 1.0).unwrap().value(),
            0.342_198_3,
            max_relative = 1e-6
        );
    }

    #[test]
    fn strict_limit_convergence() {
        // GC: f/F -> 1 at r_s = 1e-3, deviation shrinking with r
        for &(g, a) in &[(-2.0, 1.0), (1.0, 1.0), (-0.5, 0.5)] {
            let class = class_of(g, a);
            let beta = class.beta_alpha.unwrap();
            let spec = CuspSpec::new(&class, 0, Some(beta)).unwrap();
            let mut prev = f64::INFINITY;
            for &rs in &[1e-1, 1e-2, 1e-3, 1e-4] {
                let f = cusp_f(&spec, rs * beta).unwrap();
                let s = strict_cusp(&spec, rs * beta).unwrap();
                let dev = (f.value() / s.value() - 1.0).abs();
                assert!(dev < prev);
                prev = dev;
            }
            assert!(prev < 1e-4, "GC strict limit deviation {prev}");
        }
        // rVdW: deviation is the K-asymptotic correction ~ (4 nu0^2 - 1)/(8y),
        // so the radius reaching 1e-4 depends on alpha (exact at alpha = 4)
        for (a, grid) in [
            (3.0, [1e-3, 1e-5, 1e-7]),
            (4.0, [0.5, 0.3, 0.2]),
            (6.0, [0.2, 0.05, 0.02]),
        ] {
            let spec = spec_of(1.0, a, 0);
            let mut prev = f64::INFINITY;
            for &rs in &grid {
                let f = cusp_f_rvdw(&spec, rs).unwrap();
                let s = strict_cusp(&spec, rs).unwrap();
                let dev = ((f.ln_abs() - s.ln_abs()).exp() - 1.0).abs();
                assert!(dev < prev + 1e-12); // floor for the exact alpha = 4 case
                prev = dev;
            }
            assert!(prev < 1e-4, "rVdW strict limit deviation {prev} at alpha {a}");
        }
    }

    #[test]
    fn rvdw_strict_l_independence() {
        let class = class_of(1.0, 6.0);
        for l in 1..3u32 {
            let s0 = CuspSpec::new(&class, 0, None).unwrap();
            let sl = CuspSpec::new(&class, l, None).unwrap();
            let mut prev = f64::INFINITY;
            for &rs in &[0.3, 0.2, 0.12] {
                let a = cusp_f_rvdw(&s0, rs).unwrap();
                let b = cusp_f_rvdw(&sl, rs).unwrap();
                let dev = ((a.ln_abs() - b.ln_abs()).exp() - 1.0).abs();
                assert!(dev < prev);
                prev = dev;
            }
            assert!(prev < 0.05, "l-dependence {prev} persists at small r_s");
        }
    }

    #[test]
    fn wronskian_all_classes() {
        let w0 = 2.0 / PI;
        // F class: exact at any (l, r)
        let free = PotentialModel::free().classify().unwrap();
        for l in 0..4u32 {
            let spec = CuspSpec::new(&free, l, Some(1.3)).unwrap();
            for &r in &[0.1, 1.0, 7.0] {
                assert_relative_eq!(wronskian_check(&spec, r).unwrap(), w0, max_relative = 1e-10);
            }
        }
        // GC attractive / repulsive, alCD, rVdW over the standard r_s grid
        let models: Vec<ShortRangeClass> = vec![
            class_of(-2.0, 1.0),
            class_of(1.5, 1.0),
            class_of(-0.8, 0.5),
            class_of(0.6, 2.0),
            class_of(-0.2, 2.0),
            class_of(1.0, 4.0),
            class_of(2.0, 6.0),
            class_of(1.0, 3.0),
        ];
        for class in &models {
            for l in 0..3u32 {
                let spec = CuspSpec::new(class, l, None).unwrap();
                let beta = class.beta_alpha.unwrap_or(1.0);
                for &rs in &[0.1, 0.5, 1.0, 2.0, 5.0] {
                    let w = wronskian_check(&spec, rs * beta).unwrap();
                    assert_relative_eq!(w, w0, max_relative = 1e-8);
                }
            }
        }
    }

    #[test]
    fn irregular_examples() {
        let free = PotentialModel::free().classify().unwrap();
        let spec = CuspSpec::new(&free, 0, None).unwrap();
        assert_relative_eq!(
            irregular_g(&spec, 1.0).unwrap().f,
            -0.797_884_6,
            max_relative = 1e-6
        );
        // aGC alpha = 1, r_s = 1
        let class = class_of(-2.0, 1.0);
        let spec = CuspSpec::new(&class, 0, None).unwrap();
        let beta = class.beta_alpha.unwrap();
        let g = irregular_g(&spec, beta).unwrap();
        assert_relative_eq!(g.f, -0.268_289_8, max_relative = 1e-5);
    }

    #[test]
    fn gc_zero_strength_analyticity() {
        // df/dG at G=0 matches the first series term f_F * r^{2-alpha}/((nu0+1)(2-alpha)^2)
        let class = class_of(-1.0, 1.0);
        let spec = CuspSpec::new(&class, 0, Some(1.0)).unwrap();
        let r = 0.8;
        let h = 1e-4;
        let num = (cusp_f_gc(&spec, r, h).unwrap().f - cusp_f_gc(&spec, r, -h).unwrap().f)
            / (2.0 * h);
        let base = cusp_f_free(0, r, 1.0).unwrap().f;
        let expect = base * r / (spec.nu0 + 1.0); // alpha = 1: z/G = r/(2-alpha)^2 = r
        assert_relative_eq!(num, expect, max_relative = 1e-6);
    }

    #[test]
    fn rvdw_diverges_as_strength_vanishes() {
        // fixed r, D -> 0+: f grows without bound (non-analytic limit)
        let r = 1.0;
        let mut prev = 0.0;
        for k in 1..=6 {
            let d = 10.0_f64.powi(-k);
            let spec = spec_of(d, 6.0, 0);
            let v = cusp_f_rvdw(&spec, r).unwrap().value();
            assert!(v > prev);
            prev = v;
        }
        assert!(prev > 10.0);
    }

    #[test]
    fn underflow_scaling_activates() {
        let spec = spec_of(1.0, 6.0, 0);
        // y = (1/2) r_s^{-2}; r_s = 0.01 gives y = 5000, far below 1e-280
        let f = cusp_f_rvdw(&spec, 0.01).unwrap();
        assert!(f.underflow_scaled);
        assert!(f.ln_abs() < -4000.0);
        assert!(f.f != 0.0 && f.df.is_finite());
        let h = strict_cusp(&spec, 0.01).unwrap();
        assert!(h.underflow_scaled);
        // strict ratio still computable in log space
        assert!((f.ln_abs() - h.ln_abs()).abs() < 1e-2);
    }
}
