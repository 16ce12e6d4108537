//! Energy-Taylor structure of the cusp solution: u_e = f^cp + sum_j e^j x_j
//! with x_0 = f^cp the zero-energy cusp solution and each x_j obtained from
//! the inhomogeneous equation x'' - w_0 x = -x_{j-1} by variation of
//! parameters over the zero-energy pair (f, g) with W_r(f, g) = 2/(pi s):
//!
//! ```text
//! x_j(r) = (pi/2) s [ f(r) int_0^r g x_{j-1} - g(r) int_0^r f x_{j-1} ]
//! ```
//!
//! The free-particle closed form x_j = sqrt(2/pi) (-1)^j r^{l+2j+1} /
//! (2^j j! (2l+2j+1)!!) anchors the recursion before any other model is
//! trusted.

use crate::cuspfn::{irregular_g, CuspSpec};
use crate::potential::{ClassTag, PotentialModel, ShortRangeClass};
use crate::radial::{solve_regular, RadialGrid, RadialSolution};
use crate::{Error, Result};
use std::f64::consts::PI;

/// Coefficient profiles of the energy expansion on a radial grid.
#[derive(Debug, Clone)]
pub struct EnergySeries {
    pub grid: RadialGrid,
    pub l: u32,
    pub j_max: usize,
    /// x_0 = f^cp and its derivative on the grid.
    pub f_cp: Vec<f64>,
    pub df_cp: Vec<f64>,
    /// x_j for j = 1..=j_max (outer index j - 1).
    pub x: Vec<Vec<f64>>,
    pub dx: Vec<Vec<f64>>,
    /// Zero-energy curvature coefficient w_0 = v + l(l+1)/r^2 at each node,
    /// giving exact curvatures x_j'' = w_0 x_j - x_{j-1} for interpolation.
    pub w0: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct EntiretyReport {
    pub energies: Vec<f64>,
    /// Relative solver disagreement at truncation orders 2, 4, 6.
    pub errors: Vec<[f64; 3]>,
}

/// Zero-energy companion: analytic for single-term models, reduction-of-order
/// numeric otherwise.
enum Companion {
    Analytic(CuspSpec),
    Numeric { g: Vec<f64>, dg: Vec<f64> },
}

/// Cubic Hermite on one cell.
fn hermite(p0: f64, m0: f64, p1: f64, m1: f64, a: f64, b: f64, r: f64) -> f64 {
    let h = b - a;
    let t = (r - a) / h;
    let t2 = t * t;
    let t3 = t2 * t;
    p0 * (2.0 * t3 - 3.0 * t2 + 1.0)
        + h * m0 * (t3 - 2.0 * t2 + t)
        + p1 * (-2.0 * t3 + 3.0 * t2)
        + h * m1 * (t3 - t2)
}

/// off-aware product m * e^off that underflows/overflows gracefully.
fn scaled(m: f64, off: f64) -> f64 {
    if m == 0.0 || off == 0.0 {
        return if off == 0.0 { m } else { 0.0 };
    }
    let ln = m.abs().ln() + off;
    if ln < -700.0 {
        0.0
    } else {
        m.signum() * ln.exp()
    }
}

fn simpson_fixed<F>(f: &F, a: f64, b: f64, n: usize) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let h = (b - a) / n as f64;
    let mut acc = f(a)? + f(b)?;
    for i in 1..n {
        acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + i as f64 * h)?;
    }
    Ok(acc * h / 3.0)
}

fn simpson_adaptive<F>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if b <= a {
        return Ok(0.0);
    }
    let mut n = 4;
    let mut prev = simpson_fixed(f, a, b, n)?;
    while n < 2048 {
        n *= 2;
        let cur = simpson_fixed(f, a, b, n)?;
        if (cur - prev).abs() <= tol {
            return Ok(cur);
        }
        prev = cur;
    }
    Ok(prev)
}

/// Quintic Hermite on one cell from (value, slope, curvature) at both ends.
fn hermite5(
    p0: f64,
    m0: f64,
    c0: f64,
    p1: f64,
    m1: f64,
    c1: f64,
    a: f64,
    b: f64,
    r: f64,
) -> f64 {
    let h = b - a;
    let t = (r - a) / h;
    let (t2, t3) = (t * t, t * t * t);
    let (t4, t5) = (t2 * t2, t2 * t3);
    let b0 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
    let b1 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
    let b2 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
    let b3 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
    let b4 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
    let b5 = 0.5 * t3 - t4 + 0.5 * t5;
    p0 * b0 + h * m0 * b1 + h * h * c0 * b2 + p1 * b3 + h * m1 * b4 + h * h * c1 * b5
}

fn is_single_term(model: &PotentialModel) -> bool {
    model.yukawa.is_none() && model.tabulated.is_none() && model.terms.len() <= 1
}

/// Wronskian radius scale: s_L for F/alCD, beta otherwise.
fn w_scale(class: &ShortRangeClass, spec: &CuspSpec) -> f64 {
    match class.tag {
        ClassTag::F | ClassTag::SrAlCd => spec.s_l,
        _ => spec.beta_alpha.unwrap_or(spec.s_l),
    }
}

/// Leading power exponents (f ~ r^p, g ~ r^{1-p}) for the closed-form
/// strict-cusp tails below r_min; None for rVdW (tails are 0 there).
fn tail_power(class: &ShortRangeClass, spec: &CuspSpec) -> Option<f64> {
    match class.tag {
        ClassTag::SrRVdW => None,
        ClassTag::SrAlCd => Some(spec.lt + 1.0),
        _ => Some(spec.l as f64 + 1.0),
    }
}

impl EnergySeries {
    fn bracket(&self, r: f64) -> Result<usize> {
        let pts = &self.grid.points;
        if r < pts[0] || r > pts[pts.len() - 1] {
            return Err(Error::Invalid(format!("r = {r} outside series grid")));
        }
        let i = pts.partition_point(|&p| p <= r).min(pts.len() - 1);
        Ok(i.saturating_sub(1))
    }

    /// Interpolated f^cp at r.
    pub fn f_at(&self, r: f64) -> Result<f64> {
        let i = self.bracket(r)?;
        let (a, b) = (self.grid.points[i], self.grid.points[i + 1]);
        Ok(hermite5(
            self.f_cp[i],
            self.df_cp[i],
            self.w0[i] * self.f_cp[i],
            self.f_cp[i + 1],
            self.df_cp[i + 1],
            self.w0[i + 1] * self.f_cp[i + 1],
            a,
            b,
            r,
        ))
    }

    /// Interpolated x_j at r (j >= 1).
    pub fn x_at(&self, j: usize, r: f64) -> Result<f64> {
        if j == 0 || j > self.j_max {
            return Err(Error::Invalid(format!("order j = {j} not in series")));
        }
        let i = self.bracket(r)?;
        let (a, b) = (self.grid.points[i], self.grid.points[i + 1]);
        let prev = if j == 1 { &self.f_cp } else { &self.x[j - 2] };
        let c0 = self.w0[i] * self.x[j - 1][i] - prev[i];
        let c1 = self.w0[i + 1] * self.x[j - 1][i + 1] - prev[i + 1];
        Ok(hermite5(
            self.x[j - 1][i],
            self.dx[j - 1][i],
            c0,
            self.x[j - 1][i + 1],
            self.dx[j - 1][i + 1],
            c1,
            a,
            b,
            r,
        ))
    }

    /// Ratio-test estimate of the usable |e| range at r_max: min over j of
    /// |x_{j-1}/x_j| (infinite truncations of an entire function have no
    /// finite radius; this bounds where the kept orders still shrink).
    pub fn radius_estimate(&self) -> f64 {
        let n = self.grid.points.len() - 1;
        let mut prev = self.f_cp[n].abs();
        let mut best = f64::INFINITY;
        for xi in &self.x {
            let cur = xi[n].abs();
            if cur > 0.0 {
                best = best.min(prev / cur);
            }
            prev = cur;
        }
        best
    }

    /// CSV export: r, f_cp, x1..x_jmax.
    pub fn to_csv(&self) -> String {
        let mut head = String::from("r,f_cp");
        for j in 1..=self.j_max {
            head.push_str(&format!(",x{j}"));
        }
        head.push('\n');
        let mut out = head;
        for (i, &r) in self.grid.points.iter().enumerate() {
            out.push_str(&format!("{r:.16e},{:.16e}", self.f_cp[i]));
            for xi in &self.x {
                out.push_str(&format!(",{:.16e}", xi[i]));
            }
            out.push('\n');
        }
        out
    }
}

/// Build the expansion coefficients x_1..x_jmax on `grid`.
pub fn build_series(
    model: &PotentialModel,
    l: u32,
    grid: &RadialGrid,
    j_max: usize,
) -> Result<EnergySeries> {
    if j_max == 0 || j_max > 6 {
        return Err(Error::Invalid(format!("j_max = {j_max} outside 1..=6")));
    }
    let class = model.classify()?;
    let sol0 = solve_regular(model, l, 0.0, grid)?;
    let eff = sol0.class.clone();
    let spec = CuspSpec::new(&effective_for_spec(&eff)?, l, None)?;
    let scale = w_scale(&eff, &spec);
    let n = grid.points.len();

    let f_cp: Vec<f64> = (0..n).map(|i| scaled(sol0.u[i], sol0.offsets[i])).collect();
    let df_cp: Vec<f64> = (0..n)
        .map(|i| scaled(sol0.du[i], sol0.offsets[i]))
        .collect();

    let companion = build_companion(model, &class, &spec, &sol0, scale)?;
    // g value/derivative at a grid index, offset-aware
    let g_at_idx = |i: usize| -> Result<(f64, f64)> {
        match &companion {
            Companion::Analytic(sp) => {
                let gv = irregular_g(sp, grid.points[i])?;
                Ok((scaled(gv.f, gv.log_offset), scaled(gv.df, gv.log_offset)))
            }
            Companion::Numeric { g, dg } => Ok((g[i], dg[i])),
        }
    };
    // g at arbitrary r (cell-local Hermite in the numeric case)
    let g_fun = |r: f64, cell: usize| -> Result<f64> {
        match &companion {
            Companion::Analytic(sp) => {
                let gv = irregular_g(sp, r)?;
                Ok(scaled(gv.f, gv.log_offset))
            }
            Companion::Numeric { g, dg } => Ok(hermite5(
                g[cell],
                dg[cell],
                sol0.w[cell] * g[cell],
                g[cell + 1],
                dg[cell + 1],
                sol0.w[cell + 1] * g[cell + 1],
                grid.points[cell],
                grid.points[cell + 1],
                r,
            )),
        }
    };
    let f_fun = |r: f64| -> Result<f64> {
        let (u, _, off) = sol0.interpolate(r)?;
        Ok(scaled(u, off))
    };

    let p_tail = tail_power(&eff, &spec);
    let mut x = Vec::with_capacity(j_max);
    let mut dx = Vec::with_capacity(j_max);
    let mut xp = f_cp.clone();
    let mut dxp = df_cp.clone();
    // order below xp (zero at the f^cp level), for exact curvatures
    let mut xprev: Vec<f64> = vec![0.0; n];

    for j in 1..=j_max {
        // leading power of the previous order, for the sub-r_min tails
        let tails = match p_tail {
            // rVdW: int_0^{r_min} f xp is exponentially negligible, but
            // int_0^{r_min} g f is only power-small: g f -> -(1/pi) r_s^{a/2}
            // from the large-y Bessel product K I -> 1/(2y). Only the j = 1
            // level (xp = f) needs it; higher xp carry extra suppression.
            None => {
                if j == 1 {
                    let alpha = eff.dominant_alpha;
                    let beta = spec.beta_alpha.unwrap_or(1.0);
                    let rs0 = grid.r_min / beta;
                    let pw = 0.5 * alpha + 1.0;
                    (-(beta / PI) * rs0.powf(pw) / pw, 0.0)
                } else {
                    (0.0, 0.0)
                }
            }
            Some(p) => {
                let (x0, x1) = (xp[0], xp[1]);
                if x0 == 0.0 || x1 == 0.0 || x0.signum() != x1.signum() {
                    (0.0, 0.0)
                } else {
                    let q = (x1 / x0).ln() / (grid.points[1] / grid.points[0]).ln();
                    let rm = grid.points[0];
                    let (g0, _) = g_at_idx(0)?;
                    // int_0^{rm} f xp ~ f0 x0 rm/(p+q+1); g ~ r^{1-p}
                    let tf = f_cp[0] * x0 * rm / (p + q + 1.0);
                    let tg = g0 * x0 * rm / (q - p + 2.0);
                    (tg, tf)
                }
            }
        };
        let (mut ig, mut if_) = tails;
        let xmax = xp.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let tol = 1e-15 * xmax.max(1e-300);

        let mut xj = vec![0.0; n];
        let mut dxj = vec![0.0; n];
        let (g0, dg0) = g_at_idx(0)?;
        xj[0] = 0.5 * PI * scale * (f_cp[0] * ig - g0 * if_);
        dxj[0] = 0.5 * PI * scale * (df_cp[0] * ig - dg0 * if_);
        for i in 0..n - 1 {
            let (a, b) = (grid.points[i], grid.points[i + 1]);
            let (c0, c1) = (
                sol0.w[i] * xp[i] - xprev[i],
                sol0.w[i + 1] * xp[i + 1] - xprev[i + 1],
            );
            // exponentially steep cells (rVdW suppression region) are
            // interpolated in log space, where the profile is gentle:
            // (ln x)'' = w - x_prev/x - (x'/x)^2
            let steep = xp[i] != 0.0
                && xp[i + 1] != 0.0
                && xp[i].signum() == xp[i + 1].signum()
                && (xp[i + 1] / xp[i]).ln().abs() > 0.5;
            let xp_fun = |r: f64| {
                if steep {
                    let (l0, l1) = (dxp[i] / xp[i], dxp[i + 1] / xp[i + 1]);
                    let k0 = sol0.w[i] - xprev[i] / xp[i] - l0 * l0;
                    let k1 = sol0.w[i + 1] - xprev[i + 1] / xp[i + 1] - l1 * l1;
                    let s0 = xp[i].abs().ln();
                    let s1 = xp[i + 1].abs().ln();
                    xp[i].signum() * hermite5(s0, l0, k0, s1, l1, k1, a, b, r).exp()
                } else {
                    hermite5(xp[i], dxp[i], c0, xp[i + 1], dxp[i + 1], c1, a, b, r)
                }
            };
            let fg = |r: f64| -> Result<f64> { Ok(g_fun(r, i)? * xp_fun(r)) };
            let ff = |r: f64| -> Result<f64> { Ok(f_fun(r)? * xp_fun(r)) };
            let cell_tol = tol * (b - a) / (grid.r_max - grid.r_min);
            ig += simpson_adaptive(&fg, a, b, cell_tol)?;
            if_ += simpson_adaptive(&ff, a, b, cell_tol)?;
            let (gv, dgv) = g_at_idx(i + 1)?;
            xj[i + 1] = 0.5 * PI * scale * (f_cp[i + 1] * ig - gv * if_);
            dxj[i + 1] = 0.5 * PI * scale * (df_cp[i + 1] * ig - dgv * if_);
        }
        xprev = std::mem::replace(&mut xp, xj.clone());
        dxp = dxj.clone();
        x.push(xj);
        dx.push(dxj);
    }

    Ok(EnergySeries {
        grid: grid.clone(),
        l,
        j_max,
        f_cp,
        df_cp,
        x,
        dx,
        w0: sol0.w.clone(),
    })
}

/// alImtS solves carry their dominant-term class for the cusp spec.
fn effective_for_spec(class: &ShortRangeClass) -> Result<ShortRangeClass> {
    use crate::potential::PowerTerm;
    if class.tag == ClassTag::SrAlImtS {
        PotentialModel::from_terms(vec![PowerTerm {
            strength: class.dominant_strength,
            exponent: class.dominant_alpha,
        }])?
        .classify()
    } else {
        Ok(class.clone())
    }
}

/// Numeric companion by reduction of order, g = c f int dr/f^2 with
/// c = W_r(f, g) = 2/(pi scale); any admixture of f is immaterial to the
/// variation-of-parameters output.
fn build_companion(
    model: &PotentialModel,
    class: &ShortRangeClass,
    spec: &CuspSpec,
    sol0: &RadialSolution,
    scale: f64,
) -> Result<Companion> {
    if is_single_term(model) {
        // sanity: the analytic pair must reproduce its Wronskian
        let w = crate::cuspfn::wronskian_check(spec, 0.7 * sol0.grid.r_max)?;
        if (w - 2.0 / PI).abs() > 1e-6 {
            return Err(Error::CompanionUnavailable(format!(
                "analytic pair Wronskian {w} != 2/pi"
            )));
        }
        return Ok(Companion::Analytic(spec.clone()));
    }
    if sol0.node_count() > 0 {
        return Err(Error::CompanionUnavailable(
            "zero-energy solution has nodes; reduction of order ill-defined".into(),
        ));
    }
    let _ = class;
    let pts = &sol0.grid.points;
    let n = pts.len();
    let c = 2.0 / (PI * scale);
    let anchor = n / 2;
    let inv_f2 = |r: f64| -> Result<f64> {
        let (u, _, off) = sol0.interpolate(r)?;
        let v = scaled(u, off);
        if v == 0.0 {
            return Err(Error::CompanionUnavailable(
                "zero-energy solution underflows inside companion range".into(),
            ));
        }
        Ok(1.0 / (v * v))
    };
    // cumulative Q_i = int_{r_anchor}^{r_i} dr/f^2
    let mut q: Vec<f64> = vec![0.0; n];
    for i in anchor..n - 1 {
        let seg = simpson_adaptive(&inv_f2, pts[i], pts[i + 1], 1e-13 * q[i].abs().max(1.0))?;
        q[i + 1] = q[i] + seg;
    }
    for i in (0..anchor).rev() {
        let seg = simpson_adaptive(&inv_f2, pts[i], pts[i + 1], 1e-13 * q[i + 1].abs().max(1.0))?;
        q[i] = q[i + 1] - seg;
    }
    let mut g = vec![0.0; n];
    let mut dg = vec![0.0; n];
    for i in 0..n {
        let f = scaled(sol0.u[i], sol0.offsets[i]);
        let df = scaled(sol0.du[i], sol0.offsets[i]);
        g[i] = c * f * q[i];
        dg[i] = c * (df * q[i] + 1.0 / f);
    }
    // Wronskian spot check against c at interpolated midpoints
    for &i in &[n / 4, n / 2, 3 * n / 4] {
        let r = 0.5 * (pts[i] + pts[i + 1]);
        let (u, du, off) = sol0.interpolate(r)?;
        let (fv, dfv) = (scaled(u, off), scaled(du, off));
        let gv = hermite(g[i], dg[i], g[i + 1], dg[i + 1], pts[i], pts[i + 1], r);
        let dgv = c * (dfv * (q[i] + (gv / (c * fv) - q[i])) + 1.0 / fv);
        let w = fv * dgv - dfv * gv;
        if ((w - c) / c).abs() > 1e-6 {
            return Err(Error::CompanionUnavailable(format!(
                "numeric companion Wronskian {w} != {c}"
            )));
        }
    }
    Ok(Companion::Numeric { g, dg })
}

/// Truncated sum f^cp + sum_{j<=j_trunc} e^j x_j at r.
pub fn series_eval(series: &EnergySeries, energy: f64, r: f64) -> Result<f64> {
    series_eval_truncated(series, energy, r, series.j_max)
}

pub fn series_eval_truncated(
    series: &EnergySeries,
    energy: f64,
    r: f64,
    j_trunc: usize,
) -> Result<f64> {
    if j_trunc > series.j_max {
        return Err(Error::Invalid(format!(
            "truncation {j_trunc} beyond built order {}",
            series.j_max
        )));
    }
    let mut acc = series.f_at(r)?;
    let mut ej = 1.0;
    for j in 1..=j_trunc {
        ej *= energy;
        acc += ej * series.x_at(j, r)?;
    }
    Ok(acc)
}

/// Compare truncations (2, 4, 6) of the series against direct solves at each
/// energy; truncation error must shrink with order inside the usable range.
pub fn entirety_check(
    model: &PotentialModel,
    l: u32,
    r: f64,
    energies: &[f64],
    grid: &RadialGrid,
) -> Result<EntiretyReport> {
    let series = build_series(model, l, grid, 6)?;
    let mut errors = Vec::with_capacity(energies.len());
    for &e in energies {
        let sol = solve_regular(model, l, e, grid)?;
        let (u, _, off) = sol.interpolate(r)?;
        let exact = scaled(u, off);
        let mut row = [0.0; 3];
        for (k, &jt) in [2usize, 4, 6].iter().enumerate() {
            let approx = series_eval_truncated(&series, e, r, jt)?;
            row[k] = (approx - exact).abs() / exact.abs().max(1e-300);
        }
        errors.push(row);
    }
    Ok(EntiretyReport {
        energies: energies.to_vec(),
        errors,
    })
}
