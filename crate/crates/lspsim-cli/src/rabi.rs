//! Rabi splitting extraction from dressed-branch anticrossings.
//!
//! The bright sector of a symmetric ensemble is an (N+1) arrow matrix; its
//! dressed states are classified by emitter weight and by dipolar vs
//! high-order plasmon content, clustered into branches, and scanned over ω0.
//! The reported splitting is the minimum branch gap over the scan, accepted
//! only where both branches persist across neighboring ω0 points, with a
//! parabolic refinement of the minimum.

use lspsim::geometry::Orientation;
use lspsim::greens::{legendre_derivs, ModeParams};
use lspsim::hamiltonian::{build_ideal, dressed_states, DressedStates};
use num_complex::Complex64;

use crate::error::{CliError, Result};

/// Emitter-weight floor for a dressed state to count as a bright branch.
const BRIGHT_WEIGHT: f64 = 0.1;
/// Maximum branch-position jump between adjacent ω0 points (eV).
const JUMP_EV: f64 = 0.008;
/// Minimum cluster weight for the neighbor-persistence check.
const PERSIST_WEIGHT: f64 = 0.15;
/// A dipolar gap counts as open when it exceeds this multiple of the summed
/// branch widths.
const VISIBILITY: f64 = 1.2;

/// Which anticrossing to extract.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// Dressed states dominated by n >= 2 plasmon content.
    HighOrder,
    /// Dressed states dominated by the n = 1 (dipolar) mode.
    Dipolar,
}

/// One extracted anticrossing.
#[derive(Debug, Clone, Copy)]
pub struct Anticrossing {
    pub splitting_mev: f64,
    pub omega0_ev: f64,
    pub upper_width_mev: f64,
    pub lower_width_mev: f64,
}

impl Anticrossing {
    /// Whether the gap is resolvable against the branch linewidths.
    pub fn visible(&self) -> bool {
        self.splitting_mev >= VISIBILITY * (self.upper_width_mev + self.lower_width_mev)
    }
}

/// Splitting report for one emitter count.
#[derive(Debug, Clone)]
pub struct RabiReport {
    pub ne: usize,
    pub high_order: Option<Anticrossing>,
    pub dipolar: Option<Anticrossing>,
    /// Dipolar gap present and resolvable.
    pub second_gap: bool,
    /// Splitting drift above 1% when re-run with doubled mode count.
    pub convergence_flagged: bool,
}

/// Collective weights λ0^(n) of the symmetric (q = 0) ring state: the bright
/// coupling per order is g_n √λ0. For coincident emitters λ0 = N_e.
pub fn ring_lambda0(ne: usize, nmax: usize, orientation: Orientation) -> Vec<f64> {
    (1..=nmax)
        .map(|n| {
            let pn1 = 0.5 * n as f64 * (n as f64 + 1.0);
            (0..ne)
                .map(|k| {
                    let u = (2.0 * std::f64::consts::PI * k as f64 / ne as f64).cos();
                    let (p, p1, p2) = legendre_derivs(n, u);
                    match orientation {
                        Orientation::Radial => p,
                        Orientation::Polar => p1 / pn1,
                        Orientation::Azimuthal => (u * p1 - (1.0 - u * u) * p2) / pn1,
                    }
                })
                .sum()
        })
        .collect()
}

/// Bright-sector dressed states at one ω0 for couplings √(g²λ0).
fn arrow_states(
    params: &[ModeParams],
    g2: &[f64],
    lambda0: &[f64],
    omega0: f64,
    gamma0: f64,
) -> Result<DressedStates> {
    let couplings: Vec<f64> = g2
        .iter()
        .zip(lambda0)
        .map(|(g, l)| (g * l).max(0.0).sqrt())
        .collect();
    let h = build_ideal(omega0, gamma0, params, &couplings, 1);
    dressed_states(&h, &[Complex64::new(1.0, 0.0)]).map_err(CliError::Core)
}

/// Branch cluster: (position rad/s, summed weight, weight-averaged width).
type Cluster = (f64, f64, f64);

fn clusters(d: &DressedStates, branch: Branch) -> Vec<Cluster> {
    let mut states: Vec<Cluster> = (0..d.eigenvalues.len())
        .filter(|&m| {
            let w = &d.weights[m];
            w.emitter > BRIGHT_WEIGHT
                && match branch {
                    Branch::HighOrder => w.lsp1 <= w.higher,
                    Branch::Dipolar => w.lsp1 > w.higher,
                }
        })
        .map(|m| (d.omega(m), d.weights[m].emitter, d.gamma(m)))
        .collect();
    states.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut out: Vec<Cluster> = Vec::new();
    for (om, wt, gm) in states {
        if let Some(&(om0, wt0, gm0)) = out.last() {
            if om - om0 < 0.5 * (gm + gm0) {
                // merge, keeping the dominant member's position
                let pos = if wt > wt0 { om } else { om0 };
                let w = wt + wt0;
                *out.last_mut().unwrap() = (pos, w, (gm * wt + gm0 * wt0) / w);
                continue;
            }
        }
        out.push((om, wt, gm));
    }
    out
}

struct ScanPoint {
    omega0: f64,
    lower: Cluster,
    upper: Cluster,
    all: Vec<Cluster>,
}

fn nearest_match(clusters: &[Cluster], position: f64, jump: f64) -> Option<Cluster> {
    let c = clusters
        .iter()
        .min_by(|a, b| {
            (a.0 - position).abs().partial_cmp(&(b.0 - position).abs()).unwrap()
        })
        .copied()?;
    ((c.0 - position).abs() <= jump && c.1 >= PERSIST_WEIGHT).then_some(c)
}

/// Scans ω0 over [lo_ev, hi_ev] and returns the minimum persistent branch gap.
#[allow(clippy::too_many_arguments)]
pub fn scan(
    params: &[ModeParams],
    g2: &[f64],
    lambda0: &[f64],
    gamma0: f64,
    branch: Branch,
    lo_ev: f64,
    hi_ev: f64,
    points: usize,
) -> Result<Option<Anticrossing>> {
    let ev = lspsim::units::ev_to_rad_s(1.0);
    let jump = JUMP_EV * ev;
    let mut pts: Vec<Option<ScanPoint>> = Vec::with_capacity(points);
    for k in 0..points {
        let omega0 = (lo_ev + (hi_ev - lo_ev) * k as f64 / (points - 1) as f64) * ev;
        let d = arrow_states(params, g2, lambda0, omega0, gamma0)?;
        let all = clusters(&d, branch);
        let lower = all
            .iter()
            .filter(|c| c.0 < omega0)
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .copied();
        let upper = all
            .iter()
            .filter(|c| c.0 > omega0)
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .copied();
        pts.push(match (lower, upper) {
            (Some(lower), Some(upper)) => Some(ScanPoint { omega0, lower, upper, all }),
            _ => None,
        });
    }
    let mut best: Option<Anticrossing> = None;
    for i in 1..pts.len().saturating_sub(1) {
        let (Some(prev), Some(cur), Some(next)) = (&pts[i - 1], &pts[i], &pts[i + 1]) else {
            continue;
        };
        // both branches must persist at the same positions on both neighbors
        let mut neighbor_gaps = [0.0; 2];
        let mut ok = true;
        for (slot, nb) in [prev, next].into_iter().enumerate() {
            let ml = nearest_match(&nb.all, cur.lower.0, jump);
            let mu = nearest_match(&nb.all, cur.upper.0, jump);
            match (ml, mu) {
                (Some(ml), Some(mu)) => neighbor_gaps[slot] = (mu.0 - ml.0) / ev * 1e3,
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        let gap = (cur.upper.0 - cur.lower.0) / ev * 1e3;
        let [a, c] = neighbor_gaps;
        let curv = a - 2.0 * gap + c;
        let refined = if curv > 0.0 && gap <= a && gap <= c {
            gap - 0.125 * (a - c) * (a - c) / curv
        } else {
            gap
        };
        if best.is_none_or(|b| refined < b.splitting_mev) {
            best = Some(Anticrossing {
                splitting_mev: refined,
                omega0_ev: cur.omega0 / ev,
                upper_width_mev: cur.upper.2 / ev * 1e3,
                lower_width_mev: cur.lower.2 / ev * 1e3,
            });
        }
    }
    Ok(best)
}

/// Full report for one emitter count: high-order and dipolar anticrossings
/// plus the mode-doubling convergence check.
#[allow(clippy::too_many_arguments)]
pub fn report(
    params: &[ModeParams],
    params_2n: &[ModeParams],
    g2: &[f64],
    g2_2n: &[f64],
    lambda0: &dyn Fn(usize) -> Vec<f64>,
    ne: usize,
    gamma0: f64,
    high_window: (f64, f64),
    dip_window: (f64, f64),
    points: usize,
) -> Result<RabiReport> {
    let lam = lambda0(params.len());
    let high = scan(params, g2, &lam, gamma0, Branch::HighOrder, high_window.0, high_window.1, points)?;
    let dip = scan(params, g2, &lam, gamma0, Branch::Dipolar, dip_window.0, dip_window.1, points)?;
    let mut flagged = false;
    if let Some(h) = high {
        let lam2 = lambda0(params_2n.len());
        let high2 = scan(
            params_2n, g2_2n, &lam2, gamma0, Branch::HighOrder, high_window.0, high_window.1,
            points,
        )?;
        flagged = match high2 {
            Some(h2) => (h2.splitting_mev - h.splitting_mev).abs() > 0.01 * h.splitting_mev,
            None => true,
        };
    }
    let second_gap = dip.is_some_and(|d| d.visible());
    Ok(RabiReport { ne, high_order: high, dipolar: dip, second_gap, convergence_flagged: flagged })
}
