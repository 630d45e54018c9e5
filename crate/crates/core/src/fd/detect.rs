use std::collections::VecDeque;

use super::config::SchemeConfig;
use super::ops::StepRates;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Detection {
    pub converged: bool,
    /// Mean nodal growth rate over the window (over the most recent step
    /// when not converged).
    pub c_obs: f64,
}

fn uniform(r: &StepRates, cfg: &SchemeConfig) -> bool {
    r.mean > 0.0 && r.max - r.min <= cfg.stop_epsilon * r.mean
}

/// Window test on `stop_window + 1` consecutive steps: the last
/// `stop_window` have uniform rates and the mean rate moved by at most
/// `steady_epsilon * mean` per unit time from the first to the last.
fn window_test(w: &[StepRates], cfg: &SchemeConfig) -> Option<f64> {
    let (first, rest) = w.split_first()?;
    let last = rest.last()?;
    if !rest.iter().all(|r| uniform(r, cfg)) {
        return None;
    }
    let elapsed: f64 = rest.iter().map(|r| r.dt).sum();
    if (last.mean - first.mean).abs() > cfg.steady_epsilon * last.mean * elapsed {
        return None;
    }
    Some(rest.iter().map(|r| r.mean).sum::<f64>() / rest.len() as f64)
}

/// Decide from the most recent steps whether a similarity profile has
/// emerged. Each of the last `stop_window` steps must have uniform rates,
/// `max r - min r <= stop_epsilon * mean r`, and over those steps the mean
/// rate may drift by at most `steady_epsilon * mean r` per unit time.
pub fn detect_similarity(history: &[StepRates], cfg: &SchemeConfig) -> Detection {
    let m = cfg.stop_window;
    let last = history.last().map_or(0.0, |r| r.mean);
    let found = if history.len() > m {
        window_test(&history[history.len() - m - 1..], cfg)
    } else {
        None
    };
    match found {
        Some(c_obs) => Detection {
            converged: true,
            c_obs,
        },
        None => Detection {
            converged: false,
            c_obs: last,
        },
    }
}

/// Streaming form of [`detect_similarity`] keeping only the last window.
#[derive(Debug, Clone)]
pub struct Detector {
    cfg: SchemeConfig,
    recent: VecDeque<StepRates>,
}

impl Detector {
    pub fn new(cfg: &SchemeConfig) -> Self {
        Detector {
            cfg: *cfg,
            recent: VecDeque::with_capacity(cfg.stop_window + 1),
        }
    }

    pub fn push(&mut self, r: StepRates) -> Detection {
        if self.recent.len() == self.cfg.stop_window + 1 {
            self.recent.pop_front();
        }
        self.recent.push_back(r);
        let found = if self.recent.len() == self.cfg.stop_window + 1 && uniform(&r, &self.cfg) {
            window_test(self.recent.make_contiguous(), &self.cfg)
        } else {
            None
        };
        match found {
            Some(c_obs) => Detection {
                converged: true,
                c_obs,
            },
            None => Detection {
                converged: false,
                c_obs: r.mean,
            },
        }
    }
}
