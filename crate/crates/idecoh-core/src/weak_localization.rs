//! Clockwise versus counter-clockwise loop evolution and disorder
//! ensembles.
//!
//! A closed multiple-scattering loop is traversed in both senses. The
//! counter-clockwise path visits the same scatterers in reverse order, so
//! its operator string is the exact reversal of the clockwise one. All
//! generators here are real-symmetric, hence invariant under the
//! anti-unitary conjugation symmetry; any overlap decay comes purely from
//! the non-commutativity enforced by time ordering, not from an external
//! time-reversal-breaking perturbation.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::exec;
use crate::hilbert::{eigendecompose, overlap, HermitianOperator, Spectrum, StateVector};
use crate::models::{
    build_hamiltonian, build_kick, initial_state, sample_rng, InitialStateSpec, KickBasis,
    KickGeneratorSpec, ModelSpec,
};
use crate::propagation::{evolve_schedule, KickEvent, PathSchedule};

/// A closed loop: scatterer collision times and their phase generators.
#[derive(Debug, Clone)]
pub struct LoopSpec {
    total_duration: f64,
    scatterer_times: Vec<f64>,
    kick_generators: Vec<HermitianOperator>,
}

impl LoopSpec {
    pub fn new(
        total_duration: f64,
        scatterer_times: Vec<f64>,
        kick_generators: Vec<HermitianOperator>,
    ) -> Result<Self> {
        if scatterer_times.len() != kick_generators.len() {
            return Err(Error::InvalidParameter(format!(
                "{} scatterer times but {} generators",
                scatterer_times.len(),
                kick_generators.len()
            )));
        }
        // reuse the schedule validation for ordering and interiority
        let events: Vec<KickEvent> = scatterer_times
            .iter()
            .zip(&kick_generators)
            .map(|(&time, generator)| KickEvent {
                time,
                generator: generator.clone(),
            })
            .collect();
        PathSchedule::new(total_duration, events)?;
        Ok(Self {
            total_duration,
            scatterer_times,
            kick_generators,
        })
    }

    pub fn total_duration(&self) -> f64 {
        self.total_duration
    }

    pub fn scatterer_times(&self) -> &[f64] {
        &self.scatterer_times
    }

    pub fn kick_generators(&self) -> &[HermitianOperator] {
        &self.kick_generators
    }

    pub fn n_scatterers(&self) -> usize {
        self.scatterer_times.len()
    }
}

/// Builds the clockwise and counter-clockwise branch schedules.
///
/// Clockwise hits scatterer `n` at `tau_n`; counter-clockwise retraces the
/// loop, hitting scatterer `N+1-n` at `tau - tau_{N+1-n}`. Both schedules
/// share the total duration, and the counter kick sequence is the exact
/// reverse of the clockwise one.
pub fn loop_schedules(spec: &LoopSpec) -> Result<(PathSchedule, PathSchedule)> {
    let clockwise: Vec<KickEvent> = spec
        .scatterer_times()
        .iter()
        .zip(spec.kick_generators())
        .map(|(&time, generator)| KickEvent {
            time,
            generator: generator.clone(),
        })
        .collect();
    let counter: Vec<KickEvent> = spec
        .scatterer_times()
        .iter()
        .zip(spec.kick_generators())
        .rev()
        .map(|(&time, generator)| KickEvent {
            time: spec.total_duration() - time,
            generator: generator.clone(),
        })
        .collect();
    Ok((
        PathSchedule::new(spec.total_duration(), clockwise)?,
        PathSchedule::new(spec.total_duration(), counter)?,
    ))
}

/// Loop overlap and the weak-localization weight derived from it.
#[derive(Debug, Clone)]
pub struct LoopOverlapResult {
    /// `<chi_cw(tau)|chi_ccw(tau)>`.
    pub overlap: Complex64,
    /// `Re(overlap)`: the constructive-interference weight of the
    /// time-reversed pair. A proxy observable; the coherent-backscattering
    /// enhancement enters interference terms through the real part.
    pub wl_weight: f64,
    pub clockwise_state: StateVector,
    pub counter_state: StateVector,
}

/// Evolves the initial state around the loop both ways and reports the
/// overlap of the two final internal states.
pub fn loop_overlap(chi0: &StateVector, s: &Spectrum, spec: &LoopSpec) -> Result<LoopOverlapResult> {
    let (cw, ccw) = loop_schedules(spec)?;
    let clockwise_state = evolve_schedule(chi0, s, &cw)?;
    let counter_state = evolve_schedule(chi0, s, &ccw)?;
    let o = overlap(&clockwise_state, &counter_state)?;
    Ok(LoopOverlapResult {
        overlap: o,
        wl_weight: o.re,
        clockwise_state,
        counter_state,
    })
}

/// Disorder model for a loop ensemble: one internal Hamiltonian, many
/// independent draws of scatterer times and kick generators.
#[derive(Debug, Clone)]
pub struct EnsembleParams {
    pub model: ModelSpec,
    pub initial_state: InitialStateSpec,
    /// Strength of every drawn kick generator.
    pub kick_strength: f64,
    /// Commuting (eigenbasis-diagonal) or generic (rotated) disorder.
    pub kick_kind: DisorderKickKind,
    pub scatterers: usize,
    pub total_duration: f64,
    /// Histogram bin count over the weight range [-1, 1].
    pub histogram_bins: usize,
}

/// Which basis the drawn kick generators are diagonal in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DisorderKickKind {
    EigenbasisDiagonal,
    Rotated,
}

/// Histogram of weak-localization weights over [-1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    /// `bins + 1` ascending edges spanning [-1, 1].
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
}

/// Ensemble statistics of the weak-localization weight.
#[derive(Debug, Clone)]
pub struct EnsembleStats {
    pub n_samples: usize,
    /// Mean of `Re <chi_cw|chi_ccw>` over samples.
    pub mean: f64,
    /// Sample standard deviation (zero for fewer than two samples).
    pub std_dev: f64,
    pub histogram: Histogram,
    /// Per-sample weights in sample order.
    pub sample_weights: Vec<f64>,
}

fn ensemble_impl(
    params: &EnsembleParams,
    n_samples: usize,
    master_seed: u64,
    runner: impl Fn(usize, &(dyn Fn(usize) -> Result<f64> + Sync)) -> Vec<Result<f64>>,
) -> Result<EnsembleStats> {
    if n_samples == 0 {
        return Err(Error::InvalidParameter(
            "ensemble needs at least one sample".into(),
        ));
    }
    if params.scatterers == 0 {
        return Err(Error::InvalidParameter(
            "ensemble needs at least one scatterer".into(),
        ));
    }
    if params.histogram_bins == 0 {
        return Err(Error::InvalidParameter(
            "histogram needs at least one bin".into(),
        ));
    }
    if !params.total_duration.is_finite() || params.total_duration <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "loop duration must be positive, got {}",
            params.total_duration
        )));
    }

    // one disorder-free backbone shared by every sample
    let h = build_hamiltonian(&params.model)?;
    let s = eigendecompose(&h);
    let chi0 = initial_state(&params.initial_state, &s)?;

    let tau = params.total_duration;
    let n_scatterers = params.scatterers;
    let strength = params.kick_strength;
    let kind = params.kick_kind;

    // Per-sample seeds come from the sample index alone (ChaCha streams),
    // so results are identical for any worker count.
    let sample = |index: usize| -> Result<f64> {
        let mut rng = sample_rng(master_seed, index as u64);
        let mut times: Vec<f64> = (0..n_scatterers)
            .map(|_| rng.random_range(0.0..tau))
            .collect();
        times.sort_by(|a, b| a.partial_cmp(b).expect("finite times"));
        let generators: Result<Vec<HermitianOperator>> = (0..n_scatterers)
            .map(|_| {
                let basis = match kind {
                    DisorderKickKind::EigenbasisDiagonal => KickBasis::EigenbasisDiagonal,
                    DisorderKickKind::Rotated => KickBasis::Rotated {
                        rotation_seed: rng.random(),
                    },
                };
                build_kick(
                    &KickGeneratorSpec {
                        strength,
                        basis,
                        seed: rng.random(),
                    },
                    &s,
                )
            })
            .collect();
        let spec = LoopSpec::new(tau, times, generators?)?;
        Ok(loop_overlap(&chi0, &s, &spec)?.wl_weight)
    };

    let drawn = runner(n_samples, &sample);
    let mut sample_weights = Vec::with_capacity(n_samples);
    for w in drawn {
        sample_weights.push(w?);
    }

    let mean = sample_weights.iter().sum::<f64>() / n_samples as f64;
    let std_dev = if n_samples > 1 {
        let var = sample_weights
            .iter()
            .map(|w| (w - mean) * (w - mean))
            .sum::<f64>()
            / (n_samples - 1) as f64;
        var.sqrt()
    } else {
        0.0
    };

    let bins = params.histogram_bins;
    let edges: Vec<f64> = (0..=bins).map(|i| -1.0 + 2.0 * i as f64 / bins as f64).collect();
    let mut counts = vec![0usize; bins];
    for &w in &sample_weights {
        let idx = (((w + 1.0) / 2.0 * bins as f64).floor() as isize)
            .clamp(0, bins as isize - 1) as usize;
        counts[idx] += 1;
    }

    Ok(EnsembleStats {
        n_samples,
        mean,
        std_dev,
        histogram: Histogram { edges, counts },
        sample_weights,
    })
}

/// Draws `n_samples` independent disordered loops and reports statistics
/// of the weak-localization weight. Deterministic for a fixed master seed,
/// independent of worker count.
pub fn ensemble_overlap(
    params: &EnsembleParams,
    n_samples: usize,
    master_seed: u64,
) -> Result<EnsembleStats> {
    ensemble_impl(params, n_samples, master_seed, |n, f| exec::run_indexed(n, f))
}

/// Sequential reference path for [`ensemble_overlap`]; bit-identical to
/// the parallel result.
pub fn ensemble_overlap_seq(
    params: &EnsembleParams,
    n_samples: usize,
    master_seed: u64,
) -> Result<EnsembleStats> {
    ensemble_impl(params, n_samples, master_seed, |n, f| {
        exec::run_indexed_seq(n, f)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{KickBasis, ModelKind};
    use approx::assert_relative_eq;

    fn goe_spec(dim: usize, seed: u64) -> ModelSpec {
        ModelSpec {
            kind: ModelKind::GoeRandomMatrix,
            dim,
            scale: 1.0,
            seed,
        }
    }

    fn setup(dim: usize, seed: u64) -> (Spectrum, StateVector) {
        let s = eigendecompose(&build_hamiltonian(&goe_spec(dim, seed)).unwrap());
        let chi0 = initial_state(&InitialStateSpec::RandomVector { seed: seed + 50 }, &s).unwrap();
        (s, chi0)
    }

    fn rotated(s: &Spectrum, strength: f64, seed: u64) -> HermitianOperator {
        build_kick(
            &KickGeneratorSpec {
                strength,
                basis: KickBasis::Rotated {
                    rotation_seed: seed,
                },
                seed: seed + 7,
            },
            s,
        )
        .unwrap()
    }

    fn diagonal(s: &Spectrum, strength: f64, seed: u64) -> HermitianOperator {
        build_kick(
            &KickGeneratorSpec {
                strength,
                basis: KickBasis::EigenbasisDiagonal,
                seed,
            },
            s,
        )
        .unwrap()
    }

    #[test]
    fn two_scatterer_schedules_reverse_exactly() {
        let (s, _) = setup(4, 1);
        let f1 = rotated(&s, 1.0, 3);
        let f2 = rotated(&s, 1.0, 4);
        let spec = LoopSpec::new(1.0, vec![0.2, 0.7], vec![f1.clone(), f2.clone()]).unwrap();
        let (cw, ccw) = loop_schedules(&spec).unwrap();

        // clockwise: K1 at 0.2 then K2 at 0.7
        assert_eq!(cw.kicks()[0].time, 0.2);
        assert_eq!(cw.kicks()[0].generator.matrix(), f1.matrix());
        assert_eq!(cw.kicks()[1].time, 0.7);
        assert_eq!(cw.kicks()[1].generator.matrix(), f2.matrix());

        // counter: K2 at tau - 0.7 then K1 at tau - 0.2
        assert_relative_eq!(ccw.kicks()[0].time, 0.3, epsilon = 1e-15);
        assert_eq!(ccw.kicks()[0].generator.matrix(), f2.matrix());
        assert_relative_eq!(ccw.kicks()[1].time, 0.8, epsilon = 1e-15);
        assert_eq!(ccw.kicks()[1].generator.matrix(), f1.matrix());

        assert_eq!(cw.total_duration(), ccw.total_duration());
    }

    #[test]
    fn empty_loop_gives_identical_free_schedules() {
        let spec = LoopSpec::new(2.0, vec![], vec![]).unwrap();
        let (cw, ccw) = loop_schedules(&spec).unwrap();
        assert!(cw.kicks().is_empty());
        assert!(ccw.kicks().is_empty());
        assert_eq!(cw.total_duration(), ccw.total_duration());
    }

    #[test]
    fn midpoint_single_scatterer_schedules_coincide() {
        let (s, _) = setup(4, 2);
        let f = rotated(&s, 2.0, 5);
        let spec = LoopSpec::new(1.0, vec![0.5], vec![f]).unwrap();
        let (cw, ccw) = loop_schedules(&spec).unwrap();
        assert_eq!(cw.kicks()[0].time, ccw.kicks()[0].time);
    }

    #[test]
    fn midpoint_loop_overlap_is_unity() {
        let (s, chi0) = setup(8, 3);
        let f = rotated(&s, 2.0, 6);
        let spec = LoopSpec::new(1.0, vec![0.5], vec![f]).unwrap();
        let r = loop_overlap(&chi0, &s, &spec).unwrap();
        assert!((r.overlap - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn commuting_kicks_keep_unit_overlap() {
        let (s, chi0) = setup(8, 4);
        let spec = LoopSpec::new(
            1.0,
            vec![0.17, 0.62],
            vec![diagonal(&s, 1.5, 8), diagonal(&s, 1.5, 9)],
        )
        .unwrap();
        let r = loop_overlap(&chi0, &s, &spec).unwrap();
        assert!((r.overlap - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn symmetric_identical_kicks_keep_unit_overlap() {
        // K1 = K2 at tau_2 = tau - tau_1: the operator string is a palindrome
        let (s, chi0) = setup(8, 5);
        let f = rotated(&s, 1.3, 10);
        let spec = LoopSpec::new(1.0, vec![0.3, 0.7], vec![f.clone(), f]).unwrap();
        let r = loop_overlap(&chi0, &s, &spec).unwrap();
        assert!((r.overlap - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn generic_two_kick_loop_decoheres() {
        let (s, chi0) = setup(16, 6);
        let spec = LoopSpec::new(
            1.0,
            vec![0.23, 0.61],
            vec![rotated(&s, 1.0, 3), rotated(&s, 1.0, 4)],
        )
        .unwrap();
        let r = loop_overlap(&chi0, &s, &spec).unwrap();
        assert!(
            r.overlap.norm() < 1.0 - 1e-4,
            "generic loop stayed coherent: |o| = {}",
            r.overlap.norm()
        );
        assert!(r.overlap.norm() <= 1.0 + 1e-9);
        assert_relative_eq!(r.wl_weight, r.overlap.re, epsilon = 1e-15);
    }

    #[test]
    fn loop_spec_validation() {
        let (s, _) = setup(4, 7);
        let f = rotated(&s, 1.0, 11);
        assert!(LoopSpec::new(1.0, vec![0.5], vec![]).is_err());
        assert!(LoopSpec::new(1.0, vec![0.5, 0.4], vec![f.clone(), f.clone()]).is_err());
        assert!(LoopSpec::new(1.0, vec![1.0], vec![f.clone()]).is_err());
        assert!(LoopSpec::new(0.0, vec![], vec![]).is_err());
        assert!(LoopSpec::new(1.0, vec![0.5], vec![f]).is_ok());
    }

    fn base_params(dim: usize, kind: DisorderKickKind, strength: f64, n: usize) -> EnsembleParams {
        EnsembleParams {
            model: goe_spec(dim, 42),
            initial_state: InitialStateSpec::GroundState,
            kick_strength: strength,
            kick_kind: kind,
            scatterers: n,
            total_duration: 1.0,
            histogram_bins: 10,
        }
    }

    #[test]
    fn zero_strength_ensemble_is_fully_coherent() {
        let params = base_params(8, DisorderKickKind::Rotated, 0.0, 3);
        let stats = ensemble_overlap(&params, 20, 1).unwrap();
        assert_relative_eq!(stats.mean, 1.0, epsilon = 1e-10);
        assert!(stats.std_dev < 1e-10);
    }

    #[test]
    fn commuting_ensemble_is_fully_coherent() {
        let params = base_params(8, DisorderKickKind::EigenbasisDiagonal, 1.5, 3);
        let stats = ensemble_overlap(&params, 20, 2).unwrap();
        assert_relative_eq!(stats.mean, 1.0, epsilon = 1e-10);
        assert!(stats.std_dev < 1e-10);
    }

    #[test]
    fn ensemble_is_deterministic_and_matches_sequential() {
        let params = base_params(8, DisorderKickKind::Rotated, 1.0, 2);
        let a = ensemble_overlap(&params, 16, 7).unwrap();
        let b = ensemble_overlap(&params, 16, 7).unwrap();
        let c = ensemble_overlap_seq(&params, 16, 7).unwrap();
        assert_eq!(a.sample_weights, b.sample_weights);
        assert_eq!(a.sample_weights, c.sample_weights);
    }

    #[test]
    fn histogram_counts_cover_all_samples() {
        let params = base_params(8, DisorderKickKind::Rotated, 1.0, 2);
        let stats = ensemble_overlap(&params, 25, 3).unwrap();
        assert_eq!(stats.histogram.counts.iter().sum::<usize>(), 25);
        assert_eq!(stats.histogram.edges.len(), 11);
    }

    #[test]
    fn ensemble_rejects_degenerate_parameters() {
        let params = base_params(8, DisorderKickKind::Rotated, 1.0, 2);
        assert!(ensemble_overlap(&params, 0, 1).is_err());
        let mut bad = base_params(8, DisorderKickKind::Rotated, 1.0, 0);
        bad.scatterers = 0;
        assert!(ensemble_overlap(&bad, 5, 1).is_err());
    }
}
