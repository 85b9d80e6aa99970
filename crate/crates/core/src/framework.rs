//! Local certification execution model: a scheme is a prover paired with a
//! verifier that sees only one vertex's closed neighborhood (identifiers and
//! certificates). Runs build every local view, verify each vertex and
//! aggregate the verdicts and certificate sizes.

use std::fmt;

use thiserror::Error;

use crate::codec::BitString;
use crate::graph::{Graph, Vertex};

/// Step at which a verifier rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StepTag {
    Malformed,
    I,
    Ii,
    Iii,
    Iv,
    V,
}

impl StepTag {
    pub fn as_str(self) -> &'static str {
        match self {
            StepTag::Malformed => "malformed",
            StepTag::I => "i",
            StepTag::Ii => "ii",
            StepTag::Iii => "iii",
            StepTag::Iv => "iv",
            StepTag::V => "v",
        }
    }
}

impl fmt::Display for StepTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Verdict {
    Accept,
    Reject { step: StepTag, witness: String },
}

impl Verdict {
    pub fn reject(step: StepTag, witness: impl Into<String>) -> Verdict {
        Verdict::Reject {
            step,
            witness: witness.into(),
        }
    }

    pub fn is_accept(&self) -> bool {
        matches!(self, Verdict::Accept)
    }

    pub fn step(&self) -> Option<StepTag> {
        match self {
            Verdict::Accept => None,
            Verdict::Reject { step, .. } => Some(*step),
        }
    }
}

/// Everything one vertex sees: `n`, its identifier and certificate, and the
/// identifiers and certificates of its neighbors (ascending by id).
#[derive(Debug, Clone)]
pub struct LocalView<'a> {
    pub n: usize,
    pub id: Vertex,
    pub cert: &'a BitString,
    pub neighbors: Vec<(Vertex, &'a BitString)>,
}

impl LocalView<'_> {
    pub fn neighbor_cert(&self, v: Vertex) -> Option<&BitString> {
        self.neighbors
            .binary_search_by_key(&v, |&(w, _)| w)
            .ok()
            .map(|i| self.neighbors[i].1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertFileError {
    #[error("MalformedCertificate: line {line}: {reason}")]
    Malformed { line: usize, reason: String },
}

/// One certificate per vertex of `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CertificateAssignment(Vec<BitString>);

impl CertificateAssignment {
    pub fn new(certs: Vec<BitString>) -> Self {
        CertificateAssignment(certs)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, v: Vertex) -> Option<&BitString> {
        v.checked_sub(1).and_then(|i| self.0.get(i))
    }

    pub fn get_mut(&mut self, v: Vertex) -> Option<&mut BitString> {
        v.checked_sub(1).and_then(move |i| self.0.get_mut(i))
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vertex, &BitString)> {
        self.0.iter().enumerate().map(|(i, c)| (i + 1, c))
    }

    pub fn total_bits(&self) -> usize {
        self.0.iter().map(BitString::len).sum()
    }

    /// Certificate file text: one `<id> <bitlength> <hex>` line per vertex.
    pub fn to_file_text(&self) -> String {
        self.iter()
            .map(|(v, c)| format!("{v} {} {}\n", c.len(), c.to_hex()))
            .collect()
    }

    /// Strict parser for [`CertificateAssignment::to_file_text`]: ids must be
    /// exactly `1..=n` in order and each hex field must match its bit length.
    pub fn parse_file_text(text: &str, n: usize) -> Result<Self, CertFileError> {
        let mut certs = Vec::with_capacity(n);
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |reason: &str| CertFileError::Malformed {
                line,
                reason: reason.to_string(),
            };
            if raw.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = raw.split_ascii_whitespace().collect();
            let (id, len, hex) = match fields.as_slice() {
                [id, len, hex] => (*id, *len, *hex),
                [id, len] => (*id, *len, ""),
                _ => return Err(err("expected `<id> <bitlength> <hex>`")),
            };
            let id: usize = id.parse().map_err(|_| err("bad id"))?;
            let len: usize = len.parse().map_err(|_| err("bad bit length"))?;
            if id != certs.len() + 1 || id > n {
                return Err(err(&format!("expected id {}", certs.len() + 1)));
            }
            let bits = BitString::from_hex(hex, len).ok_or_else(|| err("hex does not match bit length"))?;
            certs.push(bits);
        }
        if certs.len() != n {
            return Err(CertFileError::Malformed {
                line: text.lines().count(),
                reason: format!("{} certificates for {n} vertices", certs.len()),
            });
        }
        Ok(CertificateAssignment(certs))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProverError {
    #[error("input graph is disconnected")]
    DisconnectedInput,
    #[error("no dominating clique or induced P3 in component {0}")]
    NoDominatingStructure(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameworkError {
    #[error("input graph is disconnected")]
    DisconnectedInput,
    #[error("prover failed: {0}")]
    ProverFailed(ProverError),
    #[error("no certificate for vertex {0}")]
    MissingCertificate(Vertex),
}

/// A local certification scheme. Verifiers must depend on the view alone.
pub trait Scheme: Send + Sync {
    fn name(&self) -> String;
    fn prove(&self, g: &Graph) -> Result<CertificateAssignment, ProverError>;
    fn verify(&self, view: &LocalView<'_>) -> Verdict;
}

pub fn local_view<'a>(
    g: &Graph,
    certs: &'a CertificateAssignment,
    v: Vertex,
) -> Result<LocalView<'a>, FrameworkError> {
    let cert = certs.get(v).ok_or(FrameworkError::MissingCertificate(v))?;
    let neighbors = g
        .neighbors(v)
        .iter()
        .map(|w| certs.get(w).map(|c| (w, c)).ok_or(FrameworkError::MissingCertificate(w)))
        .collect::<Result<_, _>>()?;
    Ok(LocalView {
        n: g.n(),
        id: v,
        cert,
        neighbors,
    })
}

pub fn max_cert_bits(certs: &CertificateAssignment) -> usize {
    certs.iter().map(|(_, c)| c.len()).max().unwrap_or(0)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunReport {
    /// Verdict of vertex `v` at index `v - 1`.
    pub verdicts: Vec<Verdict>,
    pub all_accept: bool,
    pub max_cert_bits: usize,
    pub total_cert_bits: usize,
}

impl RunReport {
    pub fn rejections(&self) -> usize {
        self.verdicts.iter().filter(|v| !v.is_accept()).count()
    }

    pub fn verdict(&self, v: Vertex) -> &Verdict {
        &self.verdicts[v - 1]
    }

    /// `<id> accept` / `<id> reject step=<tag> witness=<text>` lines and a
    /// `result:` summary line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, verdict) in self.verdicts.iter().enumerate() {
            match verdict {
                Verdict::Accept => out.push_str(&format!("{} accept\n", i + 1)),
                Verdict::Reject { step, witness } => {
                    out.push_str(&format!("{} reject step={step} witness={witness}\n", i + 1))
                }
            }
        }
        if self.all_accept {
            out.push_str("result: ALL-ACCEPT\n");
        } else {
            out.push_str(&format!("result: REJECTED({})\n", self.rejections()));
        }
        out
    }

    /// `max_bits=<b> n=<n> ratio=<b / n^1.5>`.
    pub fn stats_footer(&self) -> String {
        let n = self.verdicts.len();
        format!(
            "max_bits={} n={n} ratio={:.6}",
            self.max_cert_bits,
            size_ratio(self.max_cert_bits, n)
        )
    }
}

/// `bits / n^{3/2}`.
pub fn size_ratio(bits: usize, n: usize) -> f64 {
    bits as f64 / (n as f64).powf(1.5)
}

/// Proves (unless `certs` is given) and verifies every vertex.
pub fn run(g: &Graph, scheme: &dyn Scheme, certs: Option<&CertificateAssignment>) -> Result<RunReport, FrameworkError> {
    if !g.is_connected() {
        return Err(FrameworkError::DisconnectedInput);
    }
    let proved;
    let certs = match certs {
        Some(c) => c,
        None => {
            proved = scheme.prove(g).map_err(FrameworkError::ProverFailed)?;
            &proved
        }
    };
    if certs.len() != g.n() {
        return Err(FrameworkError::MissingCertificate(certs.len().min(g.n()) + 1));
    }
    let verdicts = g
        .vertices()
        .map(|v| local_view(g, certs, v).map(|view| scheme.verify(&view)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RunReport {
        all_accept: verdicts.iter().all(Verdict::is_accept),
        verdicts,
        max_cert_bits: max_cert_bits(certs),
        total_cert_bits: certs.total_bits(),
    })
}
