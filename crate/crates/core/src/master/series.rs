use std::io::{self, Write};

use super::models::{IntegrationPlan, MasterModel};
use super::propagator::Propagator;
use crate::error::{Error, Result};
use crate::qcore::{coherence_length, DensityMatrix, WaveFunction};
use crate::tolerance;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSample {
    pub t: f64,
    pub coherence_length: f64,
    pub trace_error: f64,
    pub purity: f64,
    pub hermiticity_residue: f64,
}

impl SeriesSample {
    fn of(t: f64, rho: &DensityMatrix) -> Result<Self> {
        let d = rho.diagnostics();
        Ok(Self {
            t,
            coherence_length: coherence_length(rho)?,
            trace_error: d.trace_error,
            purity: rho.purity(),
            hermiticity_residue: d.hermiticity_residue,
        })
    }
}

/// Recorded samples of one run. `truncated` is set when the run stopped early
/// because the state reached the grid edge.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceSeries {
    pub samples: Vec<SeriesSample>,
    pub truncated: Option<Error>,
}

impl CoherenceSeries {
    pub fn is_complete(&self) -> bool {
        self.truncated.is_none()
    }

    pub fn last(&self) -> Option<&SeriesSample> {
        self.samples.last()
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "t,coherence_length,trace_error,purity")?;
        for s in &self.samples {
            writeln!(
                w,
                "{:.12e},{:.12e},{:.12e},{:.12e}",
                s.t, s.coherence_length, s.trace_error, s.purity
            )?;
        }
        Ok(())
    }
}

/// Evolves `|ψ₀⟩⟨ψ₀|` and records the coherence length every
/// `plan.record_every` steps (and at t = 0).
pub fn coherence_length_series(
    model: impl Into<MasterModel>,
    psi0: &WaveFunction,
    plan: &IntegrationPlan,
) -> Result<CoherenceSeries> {
    let model = model.into();
    let prop = Propagator::for_model(*psi0.grid(), &model, plan.dt, plan.scheme)?;
    let mut rho = DensityMatrix::pure(psi0);
    let mut samples = vec![SeriesSample::of(0.0, &rho)?];
    for step in 1..=plan.n_steps {
        prop.step(&mut rho)?;
        if step % plan.record_every == 0 || step == plan.n_steps {
            let ratio = rho.boundary_ratio();
            if ratio >= tolerance::BOUNDARY_LEAK {
                return Ok(CoherenceSeries {
                    samples,
                    truncated: Some(Error::BoundaryLeak {
                        ratio,
                        limit: tolerance::BOUNDARY_LEAK,
                    }),
                });
            }
            samples.push(SeriesSample::of(step as f64 * plan.dt, &rho)?);
        }
    }
    Ok(CoherenceSeries {
        samples,
        truncated: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::master::{FreeDecoherenceModel, Scheme};
    use crate::qcore::{build_gaussian_packet, SpatialGrid};

    #[test]
    fn free_series_grows() {
        let grid = SpatialGrid::new(128, -24.0, 24.0).unwrap();
        let psi = build_gaussian_packet(grid, 0.0, 1.0, 0.0).unwrap();
        let plan = IntegrationPlan::new(0.05, 100, 10, Scheme::SplitStep).unwrap();
        let s = coherence_length_series(FreeDecoherenceModel::new(1.0, 0.0).unwrap(), &psi, &plan)
            .unwrap();
        assert!(s.is_complete());
        assert_eq!(s.samples.len(), 11);
        for w in s.samples.windows(2) {
            assert!(w[1].coherence_length > w[0].coherence_length);
        }
    }

    #[test]
    fn leak_truncates() {
        let grid = SpatialGrid::new(64, -8.0, 8.0).unwrap();
        let psi = build_gaussian_packet(grid, 0.0, 0.8, 0.0).unwrap();
        let plan = IntegrationPlan::new(0.05, 400, 5, Scheme::SplitStep).unwrap();
        let s = coherence_length_series(FreeDecoherenceModel::new(1.0, 0.0).unwrap(), &psi, &plan)
            .unwrap();
        assert!(matches!(s.truncated, Some(Error::BoundaryLeak { .. })));
        assert!(s.samples.len() < 81);
        let mut csv = Vec::new();
        s.write_csv(&mut csv).unwrap();
        assert!(String::from_utf8(csv)
            .unwrap()
            .starts_with("t,coherence_length,trace_error,purity\n"));
    }
}
