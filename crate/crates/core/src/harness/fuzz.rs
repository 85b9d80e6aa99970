use sha2::{Digest, Sha256};
use thiserror::Error;

use super::adversary::{adversarial_certificates, AdversaryStrategy};
use crate::framework::{run, CertificateAssignment, FrameworkError};
use crate::graph::Graph;
use crate::p5::P5Scheme;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FuzzError {
    #[error("PreconditionNotP5: the graph has no induced P5, so there is nothing to refute")]
    PreconditionNotP5,
    #[error(transparent)]
    Framework(#[from] FrameworkError),
}

/// An assignment under which no vertex rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    /// First 16 hex digits of the SHA-256 of the certificate file text.
    pub digest: String,
    pub assignment: CertificateAssignment,
    pub all_accept: bool,
}

impl Counterexample {
    pub fn file_name(&self) -> String {
        format!("counterexample-{}.cert", self.digest)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzReport {
    pub graph_summary: String,
    pub strategy: String,
    pub trials: usize,
    pub trials_rejected: usize,
    pub counterexample: Option<Counterexample>,
}

impl FuzzReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }

    /// Text block ending in `SOUNDNESS-FUZZ: PASS(<trials>)` or
    /// `SOUNDNESS-FUZZ: FAIL counterexample=<file>`, where `<file>` defaults
    /// to [`Counterexample::file_name`].
    pub fn render(&self, counterexample_path: Option<&str>) -> String {
        let mut out = format!(
            "graph: {}\nstrategy: {}\ntrials: {}\ntrials with a rejection: {}\n",
            self.graph_summary, self.strategy, self.trials, self.trials_rejected
        );
        match &self.counterexample {
            None => {
                out.push_str("no all-accept assignment was found by this strategy; this is evidence, not a proof of soundness\n");
                out.push_str(&format!("SOUNDNESS-FUZZ: PASS({})\n", self.trials));
            }
            Some(c) => {
                let file = counterexample_path.map_or_else(|| c.file_name(), str::to_string);
                out.push_str(&format!("all-accept assignment digest={}\n", c.digest));
                out.push_str(&format!("SOUNDNESS-FUZZ: FAIL counterexample={file}\n"));
            }
        }
        out
    }
}

pub fn assignment_digest(certs: &CertificateAssignment) -> String {
    let hash = Sha256::digest(certs.to_file_text().as_bytes());
    hash.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// Runs every assignment of `strategy` through the P5 verifier and keeps
/// the first one that no vertex rejects.
pub fn fuzz_soundness(g: &Graph, strategy: AdversaryStrategy) -> Result<FuzzReport, FuzzError> {
    let witness = g.find_induced_path(5).ok_or(FuzzError::PreconditionNotP5)?;
    if !g.is_connected() {
        return Err(FrameworkError::DisconnectedInput.into());
    }
    let mut report = FuzzReport {
        graph_summary: format!(
            "n={} m={} p5={}",
            g.n(),
            g.edge_count(),
            witness.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("-")
        ),
        strategy: format!("{} seed={}", strategy.kind, strategy.seed),
        trials: 0,
        trials_rejected: 0,
        counterexample: None,
    };
    for certs in adversarial_certificates(g, strategy) {
        report.trials += 1;
        let r = run(g, &P5Scheme, Some(&certs))?;
        if r.all_accept {
            if report.counterexample.is_none() {
                report.counterexample = Some(Counterexample {
                    digest: assignment_digest(&certs),
                    assignment: certs,
                    all_accept: true,
                });
            }
        } else {
            report.trials_rejected += 1;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::adversary::AdversaryKind;

    #[test]
    fn p5_graph_survives_every_strategy() {
        let g = Graph::path(5);
        for kind in AdversaryKind::all() {
            let r = fuzz_soundness(&g, AdversaryStrategy { kind, trials: 40, seed: 5 }).unwrap();
            assert!(r.passed(), "{kind}");
            assert_eq!(r.trials_rejected, 40);
            assert!(r.render(None).ends_with("SOUNDNESS-FUZZ: PASS(40)\n"));
        }
    }

    #[test]
    fn p5_free_input_is_refused() {
        let s = AdversaryStrategy {
            kind: AdversaryKind::WrongGraph,
            trials: 1,
            seed: 0,
        };
        assert_eq!(fuzz_soundness(&Graph::cycle(5), s), Err(FuzzError::PreconditionNotP5));
    }

    #[test]
    fn failing_report_names_the_file() {
        let certs = CertificateAssignment::new(vec![]);
        let c = Counterexample {
            digest: assignment_digest(&certs),
            assignment: certs,
            all_accept: true,
        };
        assert_eq!(c.digest.len(), 16);
        let r = FuzzReport {
            graph_summary: "n=0".into(),
            strategy: "bitflip".into(),
            trials: 1,
            trials_rejected: 0,
            counterexample: Some(c.clone()),
        };
        assert!(r.render(None).ends_with(&format!("SOUNDNESS-FUZZ: FAIL counterexample={}\n", c.file_name())));
        assert!(r.render(Some("x.cert")).ends_with("FAIL counterexample=x.cert\n"));
    }
}
