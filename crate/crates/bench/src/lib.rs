//! Fixtures shared by the benchmarks.

use cvfb_core::scenarios::build_feedback_network;
use cvfb_core::{AnalysisFrequency, Network, ScenarioConfig};

/// Default closed-loop network and its analysis frequency.
pub fn default_feedback() -> (Network, AnalysisFrequency) {
    let cfg = ScenarioConfig::default();
    let net = build_feedback_network(&cfg, true).expect("default config builds");
    (net, cfg.frequency().expect("default frequency is valid"))
}

/// A chain of `n` feedback stages, each a sample whose reflection loops
/// back onto the previous stage; stresses the dense loop solve.
pub fn sample_ladder(n: usize) -> (Network, AnalysisFrequency) {
    use cvfb_core::elements::Element;
    let cfg = ScenarioConfig::default();
    let mut net = Network::new();
    let src = net.add(Element::Nopa(cfg.nopa));
    net.source(src.input(1));
    let mut prev = src;
    let mut feed_into = src.input(0);
    for _ in 0..n {
        let s = net.add(Element::Sample {
            params: cfg.sample,
            modes: 2,
        });
        net.connect(prev.output(0), s.input(0), 0.0);
        net.connect(s.output(1), feed_into, 0.1);
        net.source(s.input(2));
        feed_into = s.input(1);
        prev = s;
    }
    net.source(feed_into);
    net.sink(prev.output(0));
    (net, cfg.frequency().expect("default frequency is valid"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_solve() {
        let (net, f) = default_feedback();
        assert!(net.solve(f).is_ok());
        for n in [1, 4, 16] {
            let (net, f) = sample_ladder(n);
            net.solve(f).unwrap();
        }
    }
}
