//! Rigidity of a cusp-normalized radial solution: the probability integral
//! P(r) = int_0^r u^2, its inverse G(r) = 1/P(r), and the identities tying
//! G to the energy derivatives of the log-derivative and R-matrix,
//! G = -[(dL/de) u^2]^{-1} = +[(dR/de) u'^2]^{-1}.
//!
//! Also covers the piecewise monotonicity of L (decreasing in energy) and
//! R (increasing) between their poles, and the cross-energy overlap
//! identity int_0^r u_{e2} u_{e1} = W_r(u_{e2}, u_{e1}) / (e2 - e1).

use crate::potential::{energy_scale, transformed_l, ClassTag, PotentialModel};
use crate::radial::{solve_regular, RadialGrid, RadialSolution};
use crate::{Error, Result};

/// Probability integral, rigidity, and energy-derivative data on a radius list.
#[derive(Debug, Clone)]
pub struct RigidityProfile {
    pub radii: Vec<f64>,
    pub prob_integral: Vec<f64>,
    pub rigidity: Vec<f64>,
    pub dl_de: Vec<f64>,
    pub dr_de: Vec<f64>,
    pub residual1: Vec<Option<f64>>,
    pub residual2: Vec<Option<f64>>,
}

/// One radius of a fundamental-identity check; a `None` residual marks a
/// point skipped for node proximity.
#[derive(Debug, Clone)]
pub struct FundamentalEntry {
    pub r: f64,
    pub residual1: Option<f64>,
    pub residual2: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct FundamentalReport {
    pub entries: Vec<FundamentalEntry>,
    /// Largest residual over non-skipped points (0 if all skipped).
    pub max_residual1: f64,
    pub max_residual2: f64,
}

#[derive(Debug, Clone)]
pub struct MonotonicityReport {
    pub samples: usize,
    /// Pole crossings of L (sign changes of u) detected along the sweep.
    pub l_poles: usize,
    /// Pole crossings of R (sign changes of u') detected along the sweep.
    pub r_poles: usize,
    pub refinements: usize,
}

/// Interpolated (u, u') with the log offset folded in; exponentially small
/// regions collapse to 0, which is exact at the precision of any integral
/// dominated by the representable part.
fn eval_uu(sol: &RadialSolution, r: f64) -> Result<(f64, f64)> {
    let (u, du, off) = sol.interpolate(r)?;
    if off == 0.0 {
        return Ok((u, du));
    }
    let s = off.exp();
    Ok((u * s, du * s))
}

fn simpson_fixed<F>(f: &F, a: f64, b: f64, n: usize) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let h = (b - a) / n as f64;
    let mut acc = f(a)? + f(b)?;
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h)?;
    }
    Ok(acc * h / 3.0)
}

/// Composite Simpson with panel doubling until the update drops below `tol`.
fn simpson_adaptive<F>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if b <= a {
        return Ok(0.0);
    }
    let mut n = 4;
    let mut prev = simpson_fixed(f, a, b, n)?;
    while n < 4096 {
        n *= 2;
        let cur = simpson_fixed(f, a, b, n)?;
        if (cur - prev).abs() <= tol {
            return Ok(cur);
        }
        prev = cur;
    }
    Ok(prev)
}

/// Closed-form contribution of (0, r_min) where the solution follows the
/// strict power cusp u ~ u(r_min) (r/r_min)^{p}: integral u(r_min)^2 r_min
/// / (2p + 1). For rVdW the solution there is exponentially small, so 0.
fn origin_tail(sol: &RadialSolution) -> Result<f64> {
    let p = match sol.class.tag {
        ClassTag::SrRVdW => return Ok(0.0),
        ClassTag::SrAlCd => {
            let g2 = sol.class.gamma2.ok_or_else(|| {
                Error::Invalid("alCD class without gamma2".into())
            })?;
            transformed_l(sol.l, g2)? + 1.0
        }
        _ => sol.l as f64 + 1.0,
    };
    let u0 = sol.u[0] * sol.offsets[0].exp();
    Ok(u0 * u0 * sol.grid.r_min / (2.0 * p + 1.0))
}

/// P(r) = int_0^r u^2, per-grid-cell Simpson on the quintic interpolant plus
/// the closed-form strict-cusp tail below r_min.
pub fn probability_integral(sol: &RadialSolution, r: f64) -> Result<f64> {
    let pts = &sol.grid.points;
    if !(r >= pts[0] && r <= sol.grid.r_max) {
        return Err(Error::Invalid(format!("r = {r} outside the solved grid")));
    }
    let umax2 = sol
        .u
        .iter()
        .zip(&sol.offsets)
        .map(|(u, o)| {
            let v = u * o.exp();
            v * v
        })
        .fold(0.0_f64, f64::max);
    let tol = 1e-12 * umax2 * r;
    let span = r - pts[0];
    let f = |x: f64| -> Result<f64> {
        let (u, _) = eval_uu(sol, x)?;
        Ok(u * u)
    };
    let mut total = origin_tail(sol)?;
    for i in 0..pts.len() - 1 {
        let a = pts[i];
        if a >= r {
            break;
        }
        let b = pts[i + 1].min(r);
        let cell_tol = if span > 0.0 {
            tol * (b - a) / span
        } else {
            tol
        };
        total += simpson_adaptive(&f, a, b, cell_tol.max(1e-300))?;
    }
    Ok(total)
}

/// G(r) = 1 / P(r).
pub fn rigidity_at(sol: &RadialSolution, r: f64) -> Result<f64> {
    let p = probability_integral(sol, r)?;
    if !(p > 0.0) {
        return Err(Error::Invalid(format!("nonpositive P(r) = {p}")));
    }
    Ok(1.0 / p)
}

fn s_energy(sol: &RadialSolution) -> f64 {
    sol.class
        .beta_alpha
        .and_then(|b| energy_scale(b).ok())
        .unwrap_or(1.0)
}

/// Roots of u' on the grid (sign changes of du refined by bisection on the
/// interpolated derivative).
fn deriv_nodes(sol: &RadialSolution) -> Vec<f64> {
    let pts = &sol.grid.points;
    let mut out = Vec::new();
    for i in 0..pts.len() - 1 {
        if sol.offsets[i] != sol.offsets[i + 1] {
            continue;
        }
        let (d0, d1) = (sol.du[i], sol.du[i + 1]);
        if d0 == 0.0 || d0.signum() == d1.signum() {
            continue;
        }
        let (mut a, mut b) = (pts[i], pts[i + 1]);
        let mut fa = d0;
        for _ in 0..80 {
            let m = 0.5 * (a + b);
            let fm = match eval_uu(sol, m) {
                Ok((_, d)) => d,
                Err(_) => break,
            };
            if fm == 0.0 {
                a = m;
                b = m;
                break;
            }
            if fa.signum() == fm.signum() {
                a = m;
                fa = fm;
            } else {
                b = m;
            }
        }
        out.push(0.5 * (a + b));
    }
    out
}

/// Distance from r to the nearest entry of `nodes`, in units of the local
/// node spacing (grid span when fewer than two nodes exist).
fn node_distance(r: f64, nodes: &[f64], grid: &RadialGrid) -> f64 {
    if nodes.is_empty() {
        return f64::INFINITY;
    }
    let mut best = f64::INFINITY;
    let mut nearest = nodes[0];
    for &nd in nodes {
        let d = (r - nd).abs();
        if d < best {
            best = d;
            nearest = nd;
        }
    }
    let spacing = if nodes.len() >= 2 {
        let mut s = f64::INFINITY;
        for w in nodes.windows(2) {
            let g = w[1] - w[0];
            let relevant = (nearest - w[0]).abs() < 1e-12 || (nearest - w[1]).abs() < 1e-12;
            if relevant && g < s {
                s = g;
            }
        }
        s
    } else {
        grid.r_max - grid.r_min
    };
    best / spacing
}

/// Five-point central-difference derivative from values at
/// e + {-2, -1, +1, +2} h.
fn central5(vm2: f64, vm1: f64, vp1: f64, vp2: f64, h: f64) -> f64 {
    (-vp2 + 8.0 * vp1 - 8.0 * vm1 + vm2) / (12.0 * h)
}

/// Check G = -[(dL/de) u^2]^{-1} = [(dR/de) u'^2]^{-1} at each listed
/// radius; points within 1e-3 node spacings of a node of u (for the L form)
/// or of u' (for the R form) are skipped.
pub fn verify_fundamental(
    model: &PotentialModel,
    l: u32,
    energy: f64,
    r_list: &[f64],
    d_eps: f64,
    grid: &RadialGrid,
) -> Result<FundamentalReport> {
    let base = solve_regular(model, l, energy, grid)?;
    let se = s_energy(&base);
    if !(d_eps > 0.0 && d_eps <= 1e-3 * energy.abs().max(se)) {
        return Err(Error::Invalid(format!(
            "d_eps = {d_eps} outside (0, 1e-3 max(|e|, s_E)]"
        )));
    }
    let stencil: Vec<RadialSolution> = [-2.0, -1.0, 1.0, 2.0]
        .iter()
        .map(|&k| solve_regular(model, l, energy + k * d_eps, grid))
        .collect::<Result<_>>()?;
    let u_nodes = base.nodes();
    let du_nodes = deriv_nodes(&base);

    let mut entries = Vec::with_capacity(r_list.len());
    let (mut max1, mut max2) = (0.0_f64, 0.0_f64);
    for &r in r_list {
        let p = probability_integral(&base, r)?;
        let (u, du) = eval_uu(&base, r)?;
        let near_u = node_distance(r, &u_nodes, &base.grid) < 1e-3;
        let near_du = node_distance(r, &du_nodes, &base.grid) < 1e-3;

        let residual1 = if near_u {
            None
        } else {
            let ls: Vec<f64> = stencil
                .iter()
                .map(|s| s.log_derivative(r))
                .collect::<Result<_>>()?;
            let dl = central5(ls[0], ls[1], ls[2], ls[3], d_eps);
            let v = (-dl * u * u - p).abs() / p;
            max1 = max1.max(v);
            Some(v)
        };
        let residual2 = if near_du {
            None
        } else {
            let rs: Vec<f64> = stencil
                .iter()
                .map(|s| s.r_matrix(r))
                .collect::<Result<_>>()?;
            let dr = central5(rs[0], rs[1], rs[2], rs[3], d_eps);
            let v = (dr * du * du - p).abs() / p;
            max2 = max2.max(v);
            Some(v)
        };
        entries.push(FundamentalEntry {
            r,
            residual1,
            residual2,
        });
    }
    Ok(FundamentalReport {
        entries,
        max_residual1: max1,
        max_residual2: max2,
    })
}

/// Profile P, G, dL/de, dR/de (and the identity residuals) over `radii`.
pub fn rigidity_profile(
    model: &PotentialModel,
    l: u32,
    energy: f64,
    radii: &[f64],
    grid: &RadialGrid,
) -> Result<RigidityProfile> {
    let base = solve_regular(model, l, energy, grid)?;
    let se = s_energy(&base);
    let d_eps = 1e-4 * energy.abs().max(se);
    let report = verify_fundamental(model, l, energy, radii, d_eps, grid)?;
    let stencil: Vec<RadialSolution> = [-2.0, -1.0, 1.0, 2.0]
        .iter()
        .map(|&k| solve_regular(model, l, energy + k * d_eps, grid))
        .collect::<Result<_>>()?;

    let mut prob = Vec::with_capacity(radii.len());
    let mut rig = Vec::with_capacity(radii.len());
    let mut dl_de = Vec::with_capacity(radii.len());
    let mut dr_de = Vec::with_capacity(radii.len());
    for &r in radii {
        let p = probability_integral(&base, r)?;
        prob.push(p);
        rig.push(1.0 / p);
        let ls: Vec<f64> = stencil
            .iter()
            .map(|s| s.log_derivative(r))
            .collect::<Result<_>>()?;
        dl_de.push(central5(ls[0], ls[1], ls[2], ls[3], d_eps));
        let rs: Vec<f64> = stencil
            .iter()
            .map(|s| s.r_matrix(r))
            .collect::<Result<_>>()?;
        dr_de.push(central5(rs[0], rs[1], rs[2], rs[3], d_eps));
    }
    Ok(RigidityProfile {
        radii: radii.to_vec(),
        prob_integral: prob,
        rigidity: rig,
        dl_de,
        dr_de,
        residual1: report.entries.iter().map(|e| e.residual1).collect(),
        residual2: report.entries.iter().map(|e| e.residual2).collect(),
    })
}

impl RigidityProfile {
    /// CSV export: r, P, G, dL_de, dR_de, residual1, residual2 (skipped
    /// residuals emitted as "nan").
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,P,G,dL_de,dR_de,residual1,residual2\n");
        let fmt_opt = |v: Option<f64>| match v {
            Some(x) => format!("{x:.16e}"),
            None => "nan".to_string(),
        };
        for i in 0..self.radii.len() {
            out.push_str(&format!(
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{},{}\n",
                self.radii[i],
                self.prob_integral[i],
                self.rigidity[i],
                self.dl_de[i],
                self.dr_de[i],
                fmt_opt(self.residual1[i]),
                fmt_opt(self.residual2[i]),
            ));
        }
        out
    }
}

/// Sweep L(r, e) and R(r, e) over the energy grid, asserting L strictly
/// decreasing and R strictly increasing between their poles. Pole crossings
/// are recognized by sign changes of u (for L) and u' (for R); an apparent
/// monotonicity violation triggers midpoint refinement (up to 2^10 extra
/// solves) before it is reported as a straddled pole.
pub fn monotonicity_scan(
    model: &PotentialModel,
    l: u32,
    r: f64,
    energies: &[f64],
    grid: &RadialGrid,
) -> Result<MonotonicityReport> {
    #[derive(Clone, Copy)]
    struct Sample {
        lval: f64,
        rval: f64,
        su: f64,
        sdu: f64,
    }
    let sample = |e: f64| -> Result<Sample> {
        let sol = solve_regular(model, l, e, grid)?;
        let (u, du) = eval_uu(&sol, r)?;
        Ok(Sample {
            lval: du / u,
            rval: u / du,
            su: u.signum(),
            sdu: du.signum(),
        })
    };

    let mut samples: Vec<(f64, Sample)> = Vec::with_capacity(energies.len());
    for &e in energies {
        samples.push((e, sample(e)?));
    }
    for w in samples.windows(2) {
        if !(w[1].0 > w[0].0) {
            return Err(Error::Invalid("energy grid must be increasing".into()));
        }
    }

    let mut refinements = 0usize;
    let mut l_poles = 0usize;
    let mut r_poles = 0usize;
    let mut i = 0;
    while i + 1 < samples.len() {
        let (e0, s0) = samples[i];
        let (e1, s1) = samples[i + 1];
        let l_ok = s0.su != s1.su || s1.lval < s0.lval;
        let r_ok = s0.sdu != s1.sdu || s1.rval > s0.rval;
        if l_ok && r_ok {
            if s0.su != s1.su {
                l_poles += 1;
            }
            if s0.sdu != s1.sdu {
                r_poles += 1;
            }
            i += 1;
            continue;
        }
        if refinements >= 1 << 10 {
            let which = if !l_ok { "L" } else { "R" };
            return Err(Error::PoleStraddle(which.into()));
        }
        refinements += 1;
        let em = 0.5 * (e0 + e1);
        if em <= e0 || em >= e1 {
            let which = if !l_ok { "L" } else { "R" };
            return Err(Error::PoleStraddle(which.into()));
        }
        samples.insert(i + 1, (em, sample(em)?));
    }
    Ok(MonotonicityReport {
        samples: samples.len(),
        l_poles,
        r_poles,
        refinements,
    })
}

/// Overlap identity: returns (int_0^r u_{e2} u_{e1},
/// W_r(u_{e2}, u_{e1}) / (e2 - e1)); the two agree whenever both solutions
/// share the pinned origin.
pub fn cross_energy_overlap(
    model: &PotentialModel,
    l: u32,
    e1: f64,
    e2: f64,
    r: f64,
    grid: &RadialGrid,
) -> Result<(f64, f64)> {
    if e1 == e2 {
        return Err(Error::Invalid("cross overlap needs e1 != e2".into()));
    }
    let s1 = solve_regular(model, l, e1, grid)?;
    let s2 = solve_regular(model, l, e2, grid)?;

    let pts = &grid.points;
    let prod = |x: f64| -> Result<f64> {
        let (u1, _) = eval_uu(&s1, x)?;
        let (u2, _) = eval_uu(&s2, x)?;
        Ok(u1 * u2)
    };
    let scale = s1
        .u
        .iter()
        .zip(&s1.offsets)
        .map(|(u, o)| (u * o.exp()).abs())
        .fold(0.0_f64, f64::max)
        * s2.u
            .iter()
            .zip(&s2.offsets)
            .map(|(u, o)| (u * o.exp()).abs())
            .fold(0.0_f64, f64::max);
    let tol = 1e-12 * scale * r;
    let span = r - pts[0];
    // shared strict-cusp origin: same power tail as the single-solution case
    let mut lhs = match s1.class.tag {
        ClassTag::SrRVdW => 0.0,
        ClassTag::SrAlCd => {
            let g2 = s1.class.gamma2.unwrap_or(0.0);
            let p = transformed_l(l, g2)? + 1.0;
            s1.u[0] * s2.u[0] * (s1.offsets[0] + s2.offsets[0]).exp() * grid.r_min
                / (2.0 * p + 1.0)
        }
        _ => {
            let p = l as f64 + 1.0;
            s1.u[0] * s2.u[0] * (s1.offsets[0] + s2.offsets[0]).exp() * grid.r_min
                / (2.0 * p + 1.0)
        }
    };
    for i in 0..pts.len() - 1 {
        let a = pts[i];
        if a >= r {
            break;
        }
        let b = pts[i + 1].min(r);
        let cell_tol = if span > 0.0 {
            tol * (b - a) / span
        } else {
            tol
        };
        lhs += simpson_adaptive(&prod, a, b, cell_tol.max(1e-300))?;
    }

    let (u1, du1) = eval_uu(&s1, r)?;
    let (u2, du2) = eval_uu(&s2, r)?;
    let rhs = (u2 * du1 - du2 * u1) / (e2 - e1);
    Ok((lhs, rhs))
}
