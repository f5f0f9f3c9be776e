use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_8, PI};

use super::arc::{arc_map, arc_unmap, circ_diff, Angle, Arc};
use crate::aggregate::type2_runs;
use crate::blackbox::{Uqpe2Contract, Uqpe2Estimator};
use crate::error::{ensure, Result};
use crate::ledger::ResourceLedger;
use crate::seed::SeedSpec;
use crate::stats;
use crate::types::TargetSpec;

/// Settings of the three-stage phase protocol: one reference run locates an
/// arc around the phase, `runs` main runs are averaged on that arc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePlan {
    pub target: TargetSpec,
    pub r: f64,
    pub s: f64,
    pub runs: u64,
    /// Half-width of the arc placed around the reference estimate.
    pub arc_half_width: f64,
    pub reference_precision: f64,
    pub reference_bias: f64,
    pub main_bias: f64,
    pub main_precision: f64,
    /// `min(delta / (2 (T + 1)), s eps / (4 pi))`, shared by the reference run.
    pub main_fail_prob: f64,
}

impl PhasePlan {
    /// Default plan. The reference precision equals the arc half-width, so a
    /// successful reference run always leaves the phase on the arc.
    pub fn new(target: TargetSpec, r: f64, s: f64) -> Result<Self> {
        target.validate()?;
        ensure(r > 0.0 && s > 0.0, "r, s", r.min(s), "must be positive")?;
        ensure(r + s < 1.0, "r + s", r + s, "must be below 1")?;
        ensure(
            target.epsilon < FRAC_PI_8,
            "epsilon",
            target.epsilon,
            "must be below pi/8",
        )?;
        let runs = type2_runs(&target, r, s);
        let eps = target.epsilon;
        Ok(Self {
            target,
            r,
            s,
            runs,
            arc_half_width: FRAC_PI_8,
            reference_precision: FRAC_PI_8,
            reference_bias: eps,
            main_bias: r * eps,
            main_precision: target.hardware_precision(),
            main_fail_prob: (target.delta / (2.0 * (runs + 1) as f64)).min(s * eps / (4.0 * PI)),
        })
    }

    /// Same plan with a different reference precision.
    pub fn with_reference_precision(mut self, precision: f64) -> Self {
        self.reference_precision = precision;
        self
    }

    pub fn reference_contract(&self) -> Result<Uqpe2Contract> {
        Uqpe2Contract::new(self.reference_bias, self.reference_precision, self.main_fail_prob)
    }

    pub fn main_contract(&self) -> Result<Uqpe2Contract> {
        Uqpe2Contract::new(self.main_bias, self.main_precision, self.main_fail_prob)
    }

    /// Reference run under child seed 0, main run `i` under child seed `i + 1`.
    pub fn run(
        &self,
        sampler: &dyn Uqpe2Estimator,
        seed: SeedSpec,
        ledger: &mut ResourceLedger,
    ) -> Result<PhaseOutcome> {
        let reference = sampler.estimate(&self.reference_contract()?, seed.derive(0), ledger)?;
        let arc = Arc::centred(reference, self.arc_half_width)?.widen(self.main_precision)?;

        let main = self.main_contract()?;
        let mut mapped = Vec::with_capacity(self.runs as usize);
        let mut escaped = false;
        for i in 0..self.runs {
            let theta = sampler.estimate(&main, seed.derive(i + 1), ledger)?;
            match arc_map(&arc, theta) {
                Ok(c) => mapped.push(c),
                Err(_) => escaped = true,
            }
        }
        if escaped {
            return Ok(PhaseOutcome {
                estimate: Angle::new(0.0),
                escaped: true,
                arc,
                mapped_mean: None,
            });
        }
        let mean = stats::mean(&mapped).clamp(0.0, 1.0);
        Ok(PhaseOutcome {
            estimate: arc_unmap(&arc, mean)?,
            escaped: false,
            arc,
            mapped_mean: Some(mean),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseOutcome {
    pub estimate: Angle,
    /// Some main-stage estimate fell outside the widened arc; the estimate
    /// is then the zero angle.
    pub escaped: bool,
    /// The widened arc the main-stage estimates were mapped through.
    pub arc: Arc,
    pub mapped_mean: Option<f64>,
}

impl PhaseOutcome {
    /// `(C(estimate) - C(theta), estimate ⊖ theta)`: the deviation on the
    /// unit interval and on the circle. They differ by the arc length.
    /// `None` if the truth is off the arc or the run escaped.
    pub fn deviations(&self, theta: Angle) -> Option<(f64, f64)> {
        let mean = self.mapped_mean?;
        let c = arc_map(&self.arc, theta).ok()?;
        Some((mean - c, circ_diff(self.estimate, theta)))
    }
}

/// Runs the default [`PhasePlan`].
pub fn lowdepth_phase_estimate(
    sampler: &dyn Uqpe2Estimator,
    target: &TargetSpec,
    r: f64,
    s: f64,
    seed: SeedSpec,
    ledger: &mut ResourceLedger,
) -> Result<PhaseOutcome> {
    PhasePlan::new(*target, r, s)?.run(sampler, seed, ledger)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blackbox::{SyntheticCostModel, SyntheticUqpe2};

    struct Exact(Angle);

    impl Uqpe2Estimator for Exact {
        fn estimate(&self, _: &Uqpe2Contract, _: SeedSpec, ledger: &mut ResourceLedger) -> Result<Angle> {
            ledger.charge(1, 1);
            Ok(self.0)
        }
    }

    /// Always lands exactly at the edge of the requested precision.
    struct EdgeHugger(Angle);

    impl Uqpe2Estimator for EdgeHugger {
        fn estimate(&self, c: &Uqpe2Contract, _: SeedSpec, ledger: &mut ResourceLedger) -> Result<Angle> {
            ledger.charge(1, 1);
            Ok(Angle::new(self.0.value() + c.precision))
        }
    }

    fn target() -> TargetSpec {
        TargetSpec::new(0.01, 0.1, 0.5).unwrap()
    }

    #[test]
    fn failure_budget_adds_up() {
        let p = PhasePlan::new(target(), 0.25, 0.25).unwrap();
        assert_eq!(p.runs, 2952);
        assert!(p.main_fail_prob + p.runs as f64 * p.main_fail_prob <= 0.1 / 2.0);
        assert!(p.main_fail_prob <= 0.25 * 0.01 / (4.0 * PI));
    }

    #[test]
    fn noiseless_sampler_is_exact() {
        for theta in [0.0, 0.02, 3.0, 6.27] {
            let mut ledger = ResourceLedger::new();
            let out = lowdepth_phase_estimate(
                &Exact(Angle::new(theta)),
                &target(),
                0.25,
                0.25,
                SeedSpec::new(0, 0),
                &mut ledger,
            )
            .unwrap();
            assert!(!out.escaped);
            assert!(circ_diff(out.estimate, Angle::new(theta)).abs() < 1e-12);
            assert_eq!(ledger.total_queries(), 2953);
        }
    }

    #[test]
    fn edge_hugging_reference_stays_on_arc() {
        let theta = Angle::new(1.0);
        let mut ledger = ResourceLedger::new();
        let out = lowdepth_phase_estimate(
            &EdgeHugger(theta),
            &target(),
            0.25,
            0.25,
            SeedSpec::new(0, 0),
            &mut ledger,
        )
        .unwrap();
        assert!(!out.escaped);
        assert!(out.arc.contains(theta));
    }

    #[test]
    fn quarter_turn_reference_loses_the_phase() {
        let theta = Angle::new(1.0);
        let plan = PhasePlan::new(target(), 0.25, 0.25)
            .unwrap()
            .with_reference_precision(PI / 4.0);
        let mut ledger = ResourceLedger::new();
        let out = plan.run(&EdgeHugger(theta), SeedSpec::new(0, 0), &mut ledger).unwrap();
        assert!(out.escaped);
        assert!(circ_diff(out.estimate, theta).abs() > 0.01);
    }

    #[test]
    fn deviations_differ_by_arc_length() {
        let theta = Angle::new(0.02);
        let sampler = SyntheticUqpe2 {
            truth: theta,
            bias_fraction: 1.0,
            tail_magnitude: 1.0,
            cost: SyntheticCostModel::default(),
        };
        let mut ledger = ResourceLedger::new();
        let out = lowdepth_phase_estimate(&sampler, &target(), 0.25, 0.25, SeedSpec::new(9, 0), &mut ledger).unwrap();
        let (norm, raw) = out.deviations(theta).unwrap();
        assert!((norm * out.arc.length() - raw).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_settings() {
        assert!(PhasePlan::new(target(), 0.5, 0.5).is_err());
        assert!(PhasePlan::new(TargetSpec::new(0.5, 0.1, 0.5).unwrap(), 0.25, 0.25).is_err());
    }
}
