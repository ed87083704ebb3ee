//! Sparsity ramp over training steps.

use super::PruneError;

/// When and how hard to prune.
///
/// Sparsity is 0 before `begin_step`, ramps from `initial_sparsity` to
/// `final_sparsity` along a cubic curve, and holds at `final_sparsity` after
/// `end_step`. Masks are recomputed every `frequency` steps inside
/// `[begin_step, end_step]`, and always at `end_step` itself so the final
/// sparsity is reached exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct PruningSchedule {
    pub initial_sparsity: f32,
    pub final_sparsity: f32,
    pub begin_step: u64,
    pub end_step: u64,
    pub frequency: u64,
}

impl PruningSchedule {
    pub fn new(
        initial_sparsity: f32,
        final_sparsity: f32,
        begin_step: u64,
        end_step: u64,
        frequency: u64,
    ) -> Result<Self, PruneError> {
        if !(0.0..1.0).contains(&initial_sparsity) {
            return Err(PruneError::InvalidSparsity(initial_sparsity));
        }
        if !(0.0..1.0).contains(&final_sparsity) {
            return Err(PruneError::InvalidSparsity(final_sparsity));
        }
        if initial_sparsity > final_sparsity {
            return Err(PruneError::InvalidSchedule(
                "initial sparsity exceeds final sparsity".into(),
            ));
        }
        if end_step <= begin_step {
            return Err(PruneError::InvalidSchedule("end_step must exceed begin_step".into()));
        }
        if frequency == 0 {
            return Err(PruneError::InvalidSchedule("frequency must be positive".into()));
        }
        Ok(Self { initial_sparsity, final_sparsity, begin_step, end_step, frequency })
    }

    /// Convenience schedule spanning a training run of `total_steps`:
    /// ramp from 0 over the middle 60% of the run (begin at 20%, end at 80%),
    /// leaving the tail for fine-tuning.
    pub fn for_run(final_sparsity: f32, total_steps: u64, frequency: u64) -> Result<Self, PruneError> {
        let begin = total_steps / 5;
        let end = (total_steps * 4 / 5).max(begin + 1);
        Self::new(0.0, final_sparsity, begin, end, frequency)
    }

    /// Target sparsity at a step: `s_f + (s_i - s_f) (1 - u)^3` with
    /// `u = (t - t0)/(t_end - t0)`, monotone non-decreasing in `t`.
    pub fn sparsity_at(&self, step: u64) -> f32 {
        if step < self.begin_step {
            return 0.0;
        }
        if step > self.end_step {
            return self.final_sparsity;
        }
        let span = (self.end_step - self.begin_step) as f64;
        let u = (step - self.begin_step) as f64 / span;
        let si = self.initial_sparsity as f64;
        let sf = self.final_sparsity as f64;
        (sf + (si - sf) * (1.0 - u).powi(3)) as f32
    }

    /// True when masks should be recomputed at this step.
    pub fn is_recompute_step(&self, step: u64) -> bool {
        if step < self.begin_step || step > self.end_step {
            return false;
        }
        step == self.end_step || (step - self.begin_step) % self.frequency == 0
    }
}
