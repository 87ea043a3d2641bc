//! Two-branch interferometer scenarios, visibility, and screen patterns.
//!
//! The center of mass is a plane wave split over two paths; the internal
//! state rides along each branch and is kicked wherever that branch
//! crosses a nonlinear region. Fringe visibility is the modulus of the
//! overlap between the two branch internal states.
//!
//! Delay segments displace only the center-of-mass wave. The internal
//! state is compared at each branch's own arrival time, so a leading or
//! trailing delay flight is removed from the internal comparison: with
//! identical kick trains the branch internal states coincide and the
//! visibility is exactly 1, whatever the delay.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{free_propagator, overlap, Spectrum, StateVector};
use crate::propagation::{evolve_schedule, KickEvent, PathSchedule};

/// The interferometer geometries under study.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioKind {
    /// Both branches free, one lengthened by a delay.
    DelayOnly,
    /// Both branches cross identical nonlinear regions.
    SymmetricNonlinear,
    /// Identical nonlinear regions, delay appended to branch 2.
    DelayAfterNonlinear,
    /// Identical nonlinear regions, delay prepended to branch 2.
    DelayBeforeNonlinear,
    /// Only branch 2 crosses a nonlinear region.
    AsymmetricNonlinear,
}

impl ScenarioKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ScenarioKind::DelayOnly => "delay-only",
            ScenarioKind::SymmetricNonlinear => "symmetric-nonlinear",
            ScenarioKind::DelayAfterNonlinear => "delay-after-nonlinear",
            ScenarioKind::DelayBeforeNonlinear => "delay-before-nonlinear",
            ScenarioKind::AsymmetricNonlinear => "asymmetric-nonlinear",
        }
    }
}

/// A fully built two-branch scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    kind: ScenarioKind,
    branch1: PathSchedule,
    branch2: PathSchedule,
    delay: f64,
}

impl Scenario {
    pub fn kind(&self) -> ScenarioKind {
        self.kind
    }

    pub fn branch1(&self) -> &PathSchedule {
        &self.branch1
    }

    pub fn branch2(&self) -> &PathSchedule {
        &self.branch2
    }

    pub fn delay(&self) -> f64 {
        self.delay
    }
}

/// Builds the branch schedules for a scenario kind.
///
/// `kicks` is the kick train of the nonlinear region (generator and time
/// pairs, times relative to branch entry); it must be empty for
/// [`ScenarioKind::DelayOnly`]. `delay` must be zero for
/// [`ScenarioKind::AsymmetricNonlinear`] and nonnegative elsewhere.
pub fn build_scenario(
    kind: ScenarioKind,
    base_duration: f64,
    kicks: Vec<KickEvent>,
    delay: f64,
) -> Result<Scenario> {
    if !delay.is_finite() || delay < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "delay must be nonnegative, got {delay}"
        )));
    }
    match kind {
        ScenarioKind::DelayOnly => {
            if !kicks.is_empty() {
                return Err(Error::InvalidParameter(
                    "delay-only scenarios carry no kicks".into(),
                ));
            }
        }
        ScenarioKind::AsymmetricNonlinear => {
            if delay > 0.0 {
                return Err(Error::InvalidParameter(
                    "asymmetric scenarios carry no delay".into(),
                ));
            }
        }
        _ => {}
    }

    let branch1 = PathSchedule::new(base_duration, kicks.clone())?;
    let branch2 = match kind {
        ScenarioKind::DelayOnly | ScenarioKind::DelayAfterNonlinear => {
            PathSchedule::new(base_duration + delay, kicks)?
        }
        ScenarioKind::SymmetricNonlinear => PathSchedule::new(base_duration, kicks)?,
        ScenarioKind::DelayBeforeNonlinear => {
            let shifted: Vec<KickEvent> = kicks
                .into_iter()
                .map(|k| KickEvent {
                    time: k.time + delay,
                    generator: k.generator,
                })
                .collect();
            PathSchedule::new(base_duration + delay, shifted)?
        }
        ScenarioKind::AsymmetricNonlinear => {
            let b2 = PathSchedule::new(base_duration, kicks)?;
            return Ok(Scenario {
                kind,
                branch1: PathSchedule::free(base_duration)?,
                branch2: b2,
                delay: 0.0,
            });
        }
    };
    Ok(Scenario {
        kind,
        branch1,
        branch2,
        delay,
    })
}

/// Branch internal states and their overlap.
#[derive(Debug, Clone)]
pub struct VisibilityResult {
    /// Complex overlap `<chi_1|chi_2>` of the comparison states.
    pub overlap_value: Complex64,
    /// Fringe visibility `|overlap_value|`.
    pub visibility: f64,
    /// The two internal states whose overlap is reported.
    pub branch_states: (StateVector, StateVector),
}

/// Evolves the initial internal state along both branches and returns the
/// overlap of the branch states at their own arrival times.
///
/// Branch 2's delay flight (trailing for delay-only / delay-after,
/// leading for delay-before) is removed before the comparison; see the
/// module documentation.
pub fn visibility(chi0: &StateVector, s: &Spectrum, scenario: &Scenario) -> Result<VisibilityResult> {
    let chi1 = evolve_schedule(chi0, s, scenario.branch1())?;
    let chi2 = match scenario.kind() {
        ScenarioKind::DelayOnly | ScenarioKind::DelayAfterNonlinear if scenario.delay() > 0.0 => {
            let raw = evolve_schedule(chi0, s, scenario.branch2())?;
            free_propagator(s, -scenario.delay())?.apply(&raw)?
        }
        ScenarioKind::DelayBeforeNonlinear if scenario.delay() > 0.0 => {
            let stripped = strip_leading_delay(scenario.branch2(), scenario.delay())?;
            evolve_schedule(chi0, s, &stripped)?
        }
        _ => evolve_schedule(chi0, s, scenario.branch2())?,
    };
    let o = overlap(&chi1, &chi2)?;
    Ok(VisibilityResult {
        overlap_value: o,
        visibility: o.norm(),
        branch_states: (chi1, chi2),
    })
}

fn strip_leading_delay(schedule: &PathSchedule, delay: f64) -> Result<PathSchedule> {
    let kicks: Vec<KickEvent> = schedule
        .kicks()
        .iter()
        .map(|k| KickEvent {
            time: k.time - delay,
            generator: k.generator.clone(),
        })
        .collect();
    PathSchedule::new(schedule.total_duration() - delay, kicks)
}

/// Screen geometry: a plane-wave center of mass sampled at fixed phases.
///
/// The center-of-mass wavevector is taken as the velocity (unit mass,
/// hbar = 1), so the extra path length contributes the relative phase
/// `cm_velocity * path_difference`.
#[derive(Debug, Clone)]
pub struct ScreenConfig {
    path_difference: f64,
    cm_velocity: f64,
    phase_samples: Vec<f64>,
}

impl ScreenConfig {
    pub fn new(path_difference: f64, cm_velocity: f64, phase_samples: Vec<f64>) -> Result<Self> {
        if !cm_velocity.is_finite() || cm_velocity <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "center-of-mass velocity must be positive, got {cm_velocity}"
            )));
        }
        if !path_difference.is_finite() {
            return Err(Error::InvalidParameter(
                "path difference must be finite".into(),
            ));
        }
        Ok(Self {
            path_difference,
            cm_velocity,
            phase_samples,
        })
    }

    pub fn phase_samples(&self) -> &[f64] {
        &self.phase_samples
    }

    /// Relative center-of-mass phase from the extra path length.
    pub fn path_phase(&self) -> f64 {
        self.cm_velocity * self.path_difference
    }
}

/// Intensity pattern on the screen:
/// `I(phi) = 1 + V cos(phi + arg(overlap) + path_phase)` per sampled phase.
/// Fringe contrast equals the visibility by construction.
pub fn screen_pattern(result: &VisibilityResult, screen: &ScreenConfig) -> Vec<f64> {
    let amplitude = result.visibility;
    let offset = result.overlap_value.arg() + screen.path_phase();
    screen
        .phase_samples()
        .iter()
        .map(|&phi| 1.0 + amplitude * (phi + offset).cos())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{eigendecompose, HermitianOperator};
    use crate::models::{
        build_hamiltonian, build_kick, initial_state, InitialStateSpec, KickBasis,
        KickGeneratorSpec, ModelKind, ModelSpec,
    };
    use approx::assert_relative_eq;

    fn setup(dim: usize, seed: u64) -> (Spectrum, StateVector) {
        let h = build_hamiltonian(&ModelSpec {
            kind: ModelKind::GoeRandomMatrix,
            dim,
            scale: 1.0,
            seed,
        })
        .unwrap();
        let s = eigendecompose(&h);
        let chi0 = initial_state(&InitialStateSpec::RandomVector { seed: seed + 100 }, &s).unwrap();
        (s, chi0)
    }

    fn kick_train(s: &Spectrum, times: &[f64], strength: f64, seed: u64) -> Vec<KickEvent> {
        times
            .iter()
            .enumerate()
            .map(|(i, &t)| KickEvent {
                time: t,
                generator: build_kick(
                    &KickGeneratorSpec {
                        strength,
                        basis: KickBasis::Rotated {
                            rotation_seed: seed + i as u64,
                        },
                        seed: seed + 1000 + i as u64,
                    },
                    s,
                )
                .unwrap(),
            })
            .collect()
    }

    #[test]
    fn delay_only_with_zero_delay_has_identical_branches() {
        let sc = build_scenario(ScenarioKind::DelayOnly, 1.0, vec![], 0.0).unwrap();
        assert_eq!(sc.branch1().total_duration(), sc.branch2().total_duration());
        assert!(sc.branch1().kicks().is_empty());
        assert!(sc.branch2().kicks().is_empty());
    }

    #[test]
    fn symmetric_scenario_has_structurally_equal_branches() {
        let (s, _) = setup(4, 1);
        let kicks = kick_train(&s, &[0.3, 0.7], 1.0, 7);
        let sc = build_scenario(ScenarioKind::SymmetricNonlinear, 1.0, kicks, 0.0).unwrap();
        assert_eq!(sc.branch1().kicks().len(), 2);
        assert_eq!(sc.branch2().kicks().len(), 2);
        for (a, b) in sc.branch1().kicks().iter().zip(sc.branch2().kicks()) {
            assert_eq!(a.time, b.time);
            assert_eq!(a.generator.matrix(), b.generator.matrix());
        }
    }

    #[test]
    fn delay_after_appends_a_free_segment_to_branch2() {
        let (s, _) = setup(4, 2);
        let kicks = kick_train(&s, &[0.4], 1.0, 9);
        let sc = build_scenario(ScenarioKind::DelayAfterNonlinear, 1.0, kicks, 0.5).unwrap();
        assert_relative_eq!(sc.branch2().total_duration(), 1.5, epsilon = 1e-15);
        assert_eq!(sc.branch2().kicks()[0].time, 0.4);
    }

    #[test]
    fn delay_before_shifts_the_kick_train() {
        let (s, _) = setup(4, 3);
        let kicks = kick_train(&s, &[0.4], 1.0, 11);
        let sc = build_scenario(ScenarioKind::DelayBeforeNonlinear, 1.0, kicks, 0.5).unwrap();
        assert_relative_eq!(sc.branch2().total_duration(), 1.5, epsilon = 1e-15);
        assert_relative_eq!(sc.branch2().kicks()[0].time, 0.9, epsilon = 1e-15);
    }

    #[test]
    fn inconsistent_parameters_are_rejected() {
        let (s, _) = setup(4, 4);
        let kicks = kick_train(&s, &[0.4], 1.0, 13);
        assert!(build_scenario(ScenarioKind::DelayOnly, 1.0, kicks.clone(), 0.1).is_err());
        assert!(build_scenario(ScenarioKind::AsymmetricNonlinear, 1.0, kicks.clone(), 0.5).is_err());
        assert!(build_scenario(ScenarioKind::SymmetricNonlinear, 1.0, kicks, -0.5).is_err());
    }

    #[test]
    fn delay_only_visibility_is_unity_for_any_state() {
        let (s, chi0) = setup(6, 5);
        let sc = build_scenario(ScenarioKind::DelayOnly, 1.0, vec![], 2.3).unwrap();
        let vr = visibility(&chi0, &s, &sc).unwrap();
        assert!((vr.visibility - 1.0).abs() < 1e-10, "visibility {}", vr.visibility);
    }

    #[test]
    fn symmetric_visibility_is_unity_for_any_kicks() {
        let (s, chi0) = setup(8, 6);
        let kicks = kick_train(&s, &[0.2, 0.6, 0.9], 2.5, 17);
        let sc = build_scenario(ScenarioKind::SymmetricNonlinear, 1.0, kicks, 0.0).unwrap();
        let vr = visibility(&chi0, &s, &sc).unwrap();
        assert!((vr.visibility - 1.0).abs() < 1e-12, "visibility {}", vr.visibility);
    }

    #[test]
    fn delayed_nonlinear_scenarios_keep_unit_visibility() {
        let (s, chi0) = setup(8, 7);
        for kind in [
            ScenarioKind::DelayAfterNonlinear,
            ScenarioKind::DelayBeforeNonlinear,
        ] {
            let kicks = kick_train(&s, &[0.35, 0.8], 1.7, 23);
            let sc = build_scenario(kind, 1.2, kicks, 0.9).unwrap();
            let vr = visibility(&chi0, &s, &sc).unwrap();
            assert!(
                (vr.visibility - 1.0).abs() < 1e-10,
                "{}: visibility {}",
                kind.as_str(),
                vr.visibility
            );
        }
    }

    #[test]
    fn asymmetric_strong_kick_decoheres() {
        let h = build_hamiltonian(&ModelSpec {
            kind: ModelKind::GoeRandomMatrix,
            dim: 32,
            scale: 1.0,
            seed: 77,
        })
        .unwrap();
        let s = eigendecompose(&h);
        let chi0 = initial_state(&InitialStateSpec::GroundState, &s).unwrap();
        let kicks = kick_train(&s, &[0.5], 2.0, 31);
        let sc = build_scenario(ScenarioKind::AsymmetricNonlinear, 1.0, kicks, 0.0).unwrap();
        let vr = visibility(&chi0, &s, &sc).unwrap();
        assert!(vr.visibility < 0.99, "visibility {}", vr.visibility);
        assert!(vr.visibility >= 0.0);
        // the reported overlap is the overlap of the reported states
        let direct = overlap(&vr.branch_states.0, &vr.branch_states.1).unwrap();
        assert!((direct - vr.overlap_value).norm() < 1e-14);
    }

    #[test]
    fn screen_pattern_spans_full_fringes_at_unit_visibility() {
        let vr = VisibilityResult {
            overlap_value: Complex64::new(1.0, 0.0),
            visibility: 1.0,
            branch_states: (
                StateVector::basis_state(2, 0).unwrap(),
                StateVector::basis_state(2, 0).unwrap(),
            ),
        };
        let screen = ScreenConfig::new(0.0, 1.0, vec![0.0, std::f64::consts::PI]).unwrap();
        let pattern = screen_pattern(&vr, &screen);
        assert_relative_eq!(pattern[0], 2.0, epsilon = 1e-12);
        assert_relative_eq!(pattern[1], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn zero_visibility_gives_a_flat_pattern() {
        let vr = VisibilityResult {
            overlap_value: Complex64::new(0.0, 0.0),
            visibility: 0.0,
            branch_states: (
                StateVector::basis_state(2, 0).unwrap(),
                StateVector::basis_state(2, 1).unwrap(),
            ),
        };
        let samples: Vec<f64> = (0..16).map(|i| i as f64 * 0.4).collect();
        let screen = ScreenConfig::new(1.0, 2.0, samples).unwrap();
        for intensity in screen_pattern(&vr, &screen) {
            assert_relative_eq!(intensity, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn fringe_contrast_equals_visibility() {
        let vr = VisibilityResult {
            overlap_value: Complex64::from_polar(0.5, std::f64::consts::PI),
            visibility: 0.5,
            branch_states: (
                StateVector::basis_state(2, 0).unwrap(),
                StateVector::basis_state(2, 1).unwrap(),
            ),
        };
        let samples: Vec<f64> = (0..2048).map(|i| i as f64 * 0.01).collect();
        let screen = ScreenConfig::new(0.0, 1.0, samples).unwrap();
        let pattern = screen_pattern(&vr, &screen);
        let max = pattern.iter().cloned().fold(f64::MIN, f64::max);
        let min = pattern.iter().cloned().fold(f64::MAX, f64::min);
        let contrast = (max - min) / (max + min);
        assert_relative_eq!(contrast, 0.5, epsilon = 1e-4);
    }

    #[test]
    fn screen_config_rejects_nonpositive_velocity() {
        assert!(ScreenConfig::new(1.0, 0.0, vec![]).is_err());
        assert!(ScreenConfig::new(1.0, -2.0, vec![]).is_err());
    }

    #[test]
    fn hermitian_zero_kick_asymmetric_scenario_is_coherent() {
        // a kick with zero generator entangles nothing
        let (s, chi0) = setup(4, 8);
        let kicks = vec![KickEvent {
            time: 0.5,
            generator: HermitianOperator::zero(4).unwrap(),
        }];
        let sc = build_scenario(ScenarioKind::AsymmetricNonlinear, 1.0, kicks, 0.0).unwrap();
        let vr = visibility(&chi0, &s, &sc).unwrap();
        assert!((vr.visibility - 1.0).abs() < 1e-10);
    }
}
