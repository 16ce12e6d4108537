//! Pair potential models, their scale parameters, and short-range
//! classification.
//!
//! A model is a finite sum of power-law terms `G_alpha / r^alpha` (signed,
//! scaled strengths), an optional Yukawa term `G_Y e^{-r/beta_Y} / r`, and an
//! optional tabulated part interpolated by a natural cubic spline. The
//! classification follows the near-origin behavior: the largest exponent
//! among diverging components decides the class, with nonphysical tags for
//! potentials too attractive to support a unique regular solution.

use crate::specialfn::ln_gamma;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

/// Single power-law component `strength / r^exponent`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PowerTerm {
    /// Signed strength in scaled units (the user supplies 2 mu G / hbar^2).
    pub strength: f64,
    /// Exponent alpha; positive exponents diverge at the origin.
    pub exponent: f64,
}

/// Yukawa component `strength * e^{-r/range} / r`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct YukawaTerm {
    pub strength: f64,
    /// Range beta_Y > 0.
    pub range: f64,
}

/// Tabulated radial samples (r_k, v_k), strictly increasing in r,
/// interpolated by a natural cubic spline.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RadialTable {
    pub r: Vec<f64>,
    pub v: Vec<f64>,
    #[serde(skip)]
    second: OnceLock<Vec<f64>>,
}

impl RadialTable {
    pub fn new(r: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        let t = RadialTable {
            r,
            v,
            second: OnceLock::new(),
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if self.r.len() != self.v.len() || self.r.len() < 4 {
            return Err(Error::Invalid(format!(
                "tabulated potential needs >= 4 matched samples, got {} / {}",
                self.r.len(),
                self.v.len()
            )));
        }
        if !self.r.iter().all(|x| x.is_finite() && *x > 0.0)
            || !self.v.iter().all(|x| x.is_finite())
        {
            return Err(Error::Invalid(
                "tabulated samples must be finite with r > 0".into(),
            ));
        }
        if !self.r.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Invalid(
                "tabulated radii must be strictly increasing".into(),
            ));
        }
        Ok(())
    }

    fn spline_second(&self) -> &[f64] {
        self.second.get_or_init(|| {
            // natural cubic spline: tridiagonal solve for v''
            let n = self.r.len();
            let mut y2 = vec![0.0; n];
            let mut u = vec![0.0; n];
            for i in 1..n - 1 {
                let sig = (self.r[i] - self.r[i - 1]) / (self.r[i + 1] - self.r[i - 1]);
                let p = sig * y2[i - 1] + 2.0;
                y2[i] = (sig - 1.0) / p;
                let dv1 = (self.v[i + 1] - self.v[i]) / (self.r[i + 1] - self.r[i]);
                let dv0 = (self.v[i] - self.v[i - 1]) / (self.r[i] - self.r[i - 1]);
                u[i] = (6.0 * (dv1 - dv0) / (self.r[i + 1] - self.r[i - 1]) - sig * u[i - 1]) / p;
            }
            for i in (1..n - 1).rev() {
                y2[i] = y2[i] * y2[i + 1] + u[i];
            }
            y2
        })
    }

    /// Spline value at r; errors outside the tabulated range.
    pub fn interpolate(&self, r: f64) -> Result<f64> {
        let n = self.r.len();
        if r < self.r[0] || r > self.r[n - 1] {
            return Err(Error::OutOfTableRange(r));
        }
        let y2 = self.spline_second();
        let i = match self.r.binary_search_by(|x| x.partial_cmp(&r).unwrap()) {
            Ok(i) => i.min(n - 2),
            Err(i) => i - 1,
        };
        let h = self.r[i + 1] - self.r[i];
        let a = (self.r[i + 1] - r) / h;
        let b = (r - self.r[i]) / h;
        Ok(a * self.v[i]
            + b * self.v[i + 1]
            + ((a * a * a - a) * y2[i] + (b * b * b - b) * y2[i + 1]) * h * h / 6.0)
    }
}

/// A pair potential: power-law terms, optional Yukawa, optional table.
/// An entirely empty model represents the free pair.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct PotentialModel {
    #[serde(default)]
    pub terms: Vec<PowerTerm>,
    #[serde(default)]
    pub yukawa: Option<YukawaTerm>,
    #[serde(default)]
    pub tabulated: Option<RadialTable>,
}

/// Short-range class tags per the physically-allowed / nonphysical taxonomy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClassTag {
    /// Free pair (no interaction).
    F,
    /// Generalized Coulomb: dominant exponent alpha < 2.
    SrGc,
    /// Attractive-or-weak charge-dipole: alpha = 2, gamma2 > -1/4.
    SrAlCd,
    /// Repulsive singular tail: alpha > 2 with positive strength.
    SrRVdW,
    /// Multiple singular terms, none singly dominant at short range.
    SrAlImtS,
    /// Attractive alpha > 2: falls to the center.
    NonphysicalAVdW,
    /// alpha = 2 with gamma2 <= -1/4: too attractive.
    NonphysicalNpCd,
}

impl ClassTag {
    /// False for the two tags that admit no regular solution at the origin.
    pub fn is_physical(&self) -> bool {
        !matches!(
            self,
            ClassTag::NonphysicalAVdW | ClassTag::NonphysicalNpCd
        )
    }
}

impl std::fmt::Display for ClassTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ClassTag::F => "F",
            ClassTag::SrGc => "SR-GC",
            ClassTag::SrAlCd => "SR-alCD",
            ClassTag::SrRVdW => "SR-rVdW",
            ClassTag::SrAlImtS => "SR-alImtS",
            ClassTag::NonphysicalAVdW => "NONPHYSICAL-aVdW",
            ClassTag::NonphysicalNpCd => "NONPHYSICAL-npCD",
        })
    }
}

/// Classification result with the scales derived from the dominant term.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ShortRangeClass {
    pub tag: ClassTag,
    pub dominant_alpha: f64,
    pub dominant_strength: f64,
    /// Dimensionless strength at alpha = 2.
    pub gamma2: Option<f64>,
    /// Length scale |G|^{1/(alpha-2)}, absent at alpha = 2 and for F.
    pub beta_alpha: Option<f64>,
    /// Transformed partial-wave number, filled in per l by the caller.
    pub lt: Option<f64>,
}

impl PotentialModel {
    pub fn free() -> Self {
        PotentialModel::default()
    }

    pub fn from_terms(terms: Vec<PowerTerm>) -> Result<Self> {
        let m = PotentialModel {
            terms,
            yukawa: None,
            tabulated: None,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        for t in &self.terms {
            if t.strength == 0.0 || !t.strength.is_finite() || !t.exponent.is_finite() {
                return Err(Error::Invalid(format!(
                    "power term needs finite nonzero strength and finite exponent, got {t:?}"
                )));
            }
        }
        if let Some(y) = &self.yukawa {
            if !(y.range > 0.0) || !y.strength.is_finite() || y.strength == 0.0 {
                return Err(Error::Invalid(format!(
                    "Yukawa term needs finite nonzero strength and range > 0, got {y:?}"
                )));
            }
        }
        if let Some(t) = &self.tabulated {
            t.validate()?;
        }
        Ok(())
    }

    fn table_only(&self) -> bool {
        self.terms.is_empty() && self.yukawa.is_none() && self.tabulated.is_some()
    }

    /// v(r); out-of-range tabulated contributions are an error when the table
    /// is the only component, and contribute zero otherwise (the table is
    /// then a local correction to the analytic parts).
    pub fn evaluate(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::Domain(format!("evaluate requires r > 0, got {r}")));
        }
        let mut v = 0.0;
        for t in &self.terms {
            v += t.strength * r.powf(-t.exponent);
        }
        if let Some(y) = &self.yukawa {
            v += y.strength * (-r / y.range).exp() / r;
        }
        if let Some(tab) = &self.tabulated {
            match tab.interpolate(r) {
                Ok(x) => v += x,
                Err(e) if self.table_only() => return Err(e),
                Err(_) => {}
            }
        }
        Ok(v)
    }

    /// Diverging components as (strength, alpha) pairs: power terms with
    /// alpha > 0, the Yukawa near-origin 1/r part, and a fitted leading power
    /// for the tabulated part when it visibly grows toward small r.
    fn diverging_components(&self) -> Result<Vec<(f64, f64)>> {
        let mut out: Vec<(f64, f64)> = self
            .terms
            .iter()
            .filter(|t| t.exponent > 0.0)
            .map(|t| (t.strength, t.exponent))
            .collect();
        if let Some(y) = &self.yukawa {
            out.push((y.strength, 1.0));
        }
        if let Some(tab) = &self.tabulated {
            if let Some(fit) = fit_leading_power(tab)? {
                out.push(fit);
            }
        }
        Ok(out)
    }

    /// Classify the short-range behavior per the dominant singular term.
    pub fn classify(&self) -> Result<ShortRangeClass> {
        self.validate()?;
        let diverging = self.diverging_components()?;
        if diverging.is_empty() {
            // bounded everywhere; near-origin behavior set by the largest
            // (least negative) exponent among the remaining terms
            let dom = self
                .terms
                .iter()
                .max_by(|a, b| a.exponent.partial_cmp(&b.exponent).unwrap());
            return Ok(match dom {
                None if self.tabulated.is_none() => ShortRangeClass {
                    tag: ClassTag::F,
                    dominant_alpha: 0.0,
                    dominant_strength: 0.0,
                    gamma2: None,
                    beta_alpha: None,
                    lt: None,
                },
                None => {
                    // bounded table only: constant-like near its inner edge
                    let tab = self.tabulated.as_ref().unwrap();
                    let s = tab.v[0];
                    ShortRangeClass {
                        tag: ClassTag::SrGc,
                        dominant_alpha: 0.0,
                        dominant_strength: s,
                        gamma2: None,
                        beta_alpha: (s != 0.0).then(|| length_scale(0.0, s.abs()).unwrap()),
                        lt: None,
                    }
                }
                Some(t) => ShortRangeClass {
                    tag: ClassTag::SrGc,
                    dominant_alpha: t.exponent,
                    dominant_strength: t.strength,
                    gamma2: None,
                    beta_alpha: Some(length_scale(t.exponent, t.strength.abs())?),
                    lt: None,
                },
            });
        }
        let &(g_dom, a_dom) = diverging
            .iter()
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();

        // nonphysical dominants take precedence over any admixture question
        if a_dom == 2.0 {
            let gamma2 = g_dom;
            let tag = if gamma2 > -0.25 {
                ClassTag::SrAlCd
            } else {
                ClassTag::NonphysicalNpCd
            };
            return Ok(ShortRangeClass {
                tag,
                dominant_alpha: 2.0,
                dominant_strength: g_dom,
                gamma2: Some(gamma2),
                beta_alpha: None,
                lt: None,
            });
        }
        let beta = length_scale(a_dom, g_dom.abs())?;
        if a_dom > 2.0 && g_dom < 0.0 {
            return Ok(ShortRangeClass {
                tag: ClassTag::NonphysicalAVdW,
                dominant_alpha: a_dom,
                dominant_strength: g_dom,
                gamma2: None,
                beta_alpha: Some(beta),
                lt: None,
            });
        }

        // admixture check: the dominant term must carry >= 90% of |v| at
        // r0 = 0.1 beta_dominant, else no single-term cusp solution applies
        if diverging.len() > 1 {
            let r0 = 0.1 * beta;
            let v_dom = g_dom * r0.powf(-a_dom);
            let v_tot: f64 = diverging.iter().map(|&(g, a)| g * r0.powf(-a)).sum();
            if !(v_dom.abs() >= 0.9 * v_tot.abs()) || v_tot == 0.0 {
                return Ok(ShortRangeClass {
                    tag: ClassTag::SrAlImtS,
                    dominant_alpha: a_dom,
                    dominant_strength: g_dom,
                    gamma2: None,
                    beta_alpha: Some(beta),
                    lt: None,
                });
            }
        }

        let tag = if a_dom < 2.0 {
            ClassTag::SrGc
        } else {
            ClassTag::SrRVdW
        };
        Ok(ShortRangeClass {
            tag,
            dominant_alpha: a_dom,
            dominant_strength: g_dom,
            gamma2: None,
            beta_alpha: Some(beta),
            lt: None,
        })
    }
}

/// Leading-power fit log|v| = c - alpha log r over the three smallest grid
/// points; returns None when the table does not grow toward small r.
fn fit_leading_power(tab: &RadialTable) -> Result<Option<(f64, f64)>> {
    if !(tab.v[0].abs() > tab.v[2].abs() && tab.v[0].abs() > 1e-300) {
        return Ok(None);
    }
    let xs: Vec<f64> = tab.r[..3].iter().map(|r| r.ln()).collect();
    let ys: Vec<f64> = tab.v[..3].iter().map(|v| v.abs().max(1e-300).ln()).collect();
    let xm = xs.iter().sum::<f64>() / 3.0;
    let ym = ys.iter().sum::<f64>() / 3.0;
    let sxx: f64 = xs.iter().map(|x| (x - xm) * (x - xm)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
    let syy: f64 = ys.iter().map(|y| (y - ym) * (y - ym)).sum();
    let slope = sxy / sxx;
    let r2 = if syy > 0.0 { sxy * sxy / (sxx * syy) } else { 1.0 };
    if r2 < 0.999 {
        return Err(Error::ClassificationAmbiguous(format!(
            "tabulated leading-power fit has R^2 = {r2:.6} < 0.999"
        )));
    }
    let alpha = -slope;
    if alpha <= 0.0 {
        return Ok(None);
    }
    // strength from the innermost sample: v ~ G / r^alpha
    let g = tab.v[0] * tab.r[0].powf(alpha);
    Ok(Some((g, alpha)))
}

/// beta_alpha = s^{1/(alpha-2)} for a scaled strength s > 0.
pub fn length_scale(alpha: f64, scaled_strength: f64) -> Result<f64> {
    if alpha == 2.0 {
        return Err(Error::Domain(
            "length_scale undefined at alpha = 2 (dimensionless strength)".into(),
        ));
    }
    if !(scaled_strength > 0.0) {
        return Err(Error::Domain(format!(
            "length_scale requires strength > 0, got {scaled_strength}"
        )));
    }
    Ok(scaled_strength.powf(1.0 / (alpha - 2.0)))
}

/// s_E = 1 / beta_alpha^2 in scaled units.
pub fn energy_scale(beta_alpha: f64) -> Result<f64> {
    if !(beta_alpha > 0.0) {
        return Err(Error::Domain(format!(
            "energy_scale requires beta > 0, got {beta_alpha}"
        )));
    }
    Ok(1.0 / (beta_alpha * beta_alpha))
}

/// l_t = sqrt((l+1/2)^2 + gamma2) - 1/2.
pub fn transformed_l(l: u32, gamma2: f64) -> Result<f64> {
    let lh = l as f64 + 0.5;
    let rad = lh * lh + gamma2;
    if rad < 0.0 {
        return Err(Error::Domain(format!(
            "transformed l is complex: (l+1/2)^2 + gamma2 = {rad} < 0"
        )));
    }
    Ok(rad.sqrt() - 0.5)
}

/// nu0 = 2 (l + 1/2) / |alpha - 2|, the cusp Bessel order away from alpha=2.
pub fn cusp_order(l_eff: f64, alpha: f64) -> Result<f64> {
    if alpha == 2.0 {
        return Err(Error::Domain("cusp order undefined at alpha = 2".into()));
    }
    Ok(2.0 * (l_eff + 0.5) / (alpha - 2.0).abs())
}

/// GC normalization b_l = (2-alpha)^{nu0+1/2} Gamma(nu0+1) / (2^{l+1} Gamma(l+3/2)).
pub fn gc_normalization(l: u32, alpha: f64) -> Result<f64> {
    if !(alpha < 2.0) {
        return Err(Error::Domain(format!(
            "GC normalization requires alpha < 2, got {alpha}"
        )));
    }
    let nu0 = cusp_order(l as f64, alpha)?;
    let lf = l as f64;
    let ln = (nu0 + 0.5) * (2.0 - alpha).ln() + ln_gamma(nu0 + 1.0)
        - (lf + 1.0) * 2.0_f64.ln()
        - ln_gamma(lf + 1.5);
    Ok(ln.exp())
}
