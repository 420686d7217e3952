//! Clustering of sampled zeros into components and the constancy of the
//! conformal factor (equivalently `div v = n φ / 2`) on each.

use serde::Serialize;

use super::singular::regular_dimension;
use super::ZeroSample;
use crate::error::{Error, Result};
use crate::field::ConformalFieldParams;

#[derive(Clone, Debug, Serialize)]
pub struct ComponentReport {
    pub component_id: usize,
    /// Indices into the sample.
    pub points: Vec<usize>,
    pub is_singular_point: Vec<bool>,
    pub estimated_codim: usize,
    /// Filled in by callers that run the curvature test on the component.
    pub umbilicity_residual: Option<f64>,
    pub phi_values: Vec<f64>,
    pub phi_spread: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DivergenceReport {
    pub components: Vec<ComponentReport>,
    pub link_radius: f64,
    /// Smallest distance between points of different components.
    pub min_gap: f64,
    /// Components closer than twice the link radius: the split may be an
    /// artefact of sampling.
    pub ambiguous: bool,
    pub max_spread: f64,
    pub tol: f64,
    pub pass: bool,
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    let mut i = i;
    while parent[i] != r {
        let next = parent[i];
        parent[i] = r;
        i = next;
    }
    r
}

/// Single-linkage clusters with link radius
/// `clamp(4 * largest nearest-neighbour distance, 10 * dedupe, radius / 2)`.
/// `singular` holds optional per-point flags from the singular-set check.
pub fn divergence_constancy(
    p: &ConformalFieldParams,
    sample: &ZeroSample,
    singular: Option<&[bool]>,
    seed: u64,
) -> Result<DivergenceReport> {
    let pts = &sample.points;
    if pts.is_empty() {
        return Err(Error::InsufficientSample("no zeros to cluster".into()));
    }
    if let Some(f) = singular {
        if f.len() != pts.len() {
            return Err(Error::DimensionMismatch {
                what: "singular flags",
                expected: pts.len(),
                got: f.len(),
            });
        }
    }
    let m = pts.len();
    let dist = |i: usize, j: usize| (&pts[i] - &pts[j]).norm();
    let widest = (0..m)
        .map(|i| (0..m).filter(|&j| j != i).map(|j| dist(i, j)).fold(f64::INFINITY, f64::min))
        .filter(|d| d.is_finite())
        .fold(0.0, f64::max);
    let link_radius = (4.0 * widest).clamp(10.0 * sample.dedupe_radius(), 0.5 * sample.radius);
    let mut parent: Vec<usize> = (0..m).collect();
    for i in 0..m {
        for j in (i + 1)..m {
            if dist(i, j) <= link_radius {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let roots: Vec<usize> = (0..m).map(|i| find(&mut parent, i)).collect();
    let mut ids: Vec<usize> = roots.clone();
    ids.sort_unstable();
    ids.dedup();
    let mut min_gap = f64::INFINITY;
    for i in 0..m {
        for j in (i + 1)..m {
            if roots[i] != roots[j] {
                min_gap = min_gap.min(dist(i, j));
            }
        }
    }
    let scale = p.param_scale();
    let tol = 1e-8 * scale;
    let mut components = Vec::new();
    for (cid, root) in ids.iter().enumerate() {
        let members: Vec<usize> = (0..m).filter(|&i| roots[i] == *root).collect();
        let phi_values: Vec<f64> = members.iter().map(|&i| p.conformal_factor(&pts[i])).collect();
        let lo = phi_values.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = phi_values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let probe: Vec<_> = members.iter().take(16).map(|&i| pts[i].clone()).collect();
        let dim = regular_dimension(p, &probe, sample.radius, seed ^ cid as u64).dim;
        components.push(ComponentReport {
            component_id: cid,
            is_singular_point: members.iter().map(|&i| singular.map(|f| f[i]).unwrap_or(false)).collect(),
            points: members,
            estimated_codim: p.dim() - dim,
            umbilicity_residual: None,
            phi_values,
            phi_spread: hi - lo,
        });
    }
    let max_spread = components.iter().map(|c| c.phi_spread).fold(0.0, f64::max);
    Ok(DivergenceReport {
        link_radius,
        min_gap,
        ambiguous: min_gap < 2.0 * link_radius,
        max_spread,
        tol,
        pass: max_spread <= tol,
        components,
    })
}
