//! Global persistence verdict.
//!
//! A bounded mass-action system is persistent once every siphon is
//! excluded. When the network is also complex balanced for every choice of
//! rates, the same routes give global attraction to the positive
//! equilibrium of each compatibility class.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::exactla::Rational;
use crate::netmodel::Network;
use crate::siphon::{
    classify, enumerate_siphon_sets, has_nested_critical_locking_sets, SiphonError, SiphonRecord,
    DEFAULT_SIPHON_CAP,
};
use crate::structure::{summarize, StructureSummary};
use crate::wdne::{
    certify_siphon, default_epsilon, CertificateRoute, CertifyConfig, OrderPair, Refutation,
    SiphonStatus, DEFAULT_J_SUBSET_CAP,
};

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisConfig {
    pub epsilon: Rational,
    pub j_subset_cap: usize,
    pub siphon_cap: usize,
    /// Treat every trajectory as bounded when no structural argument applies.
    pub assume_bounded: bool,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            epsilon: default_epsilon(),
            j_subset_cap: DEFAULT_J_SUBSET_CAP,
            siphon_cap: DEFAULT_SIPHON_CAP,
            assume_bounded: false,
        }
    }
}

impl AnalysisConfig {
    pub fn certify_config(&self) -> CertifyConfig {
        CertifyConfig {
            epsilon: self.epsilon.clone(),
            j_subset_cap: self.j_subset_cap,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Boundedness {
    Conservative,
    ComplexBalancedStructural,
    AssumedByFlag,
    Unknown,
}

impl Boundedness {
    pub fn is_bounded(self) -> bool {
        self != Boundedness::Unknown
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Persistent,
    PersistentAndGAC,
    PersistentIfBounded,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SiphonAnalysis {
    pub record: SiphonRecord,
    pub status: SiphonStatus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisReport {
    pub species: Vec<String>,
    pub structure: StructureSummary,
    pub boundedness: Boundedness,
    pub siphons: Vec<SiphonAnalysis>,
    /// Reported for comparison only; never used by the verdict.
    pub nested_critical_locking_sets: bool,
    pub verdict: Verdict,
    pub rule_trace: Vec<TraceEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    #[serde(rename = "I", serialize_with = "crate::ser::one_based")]
    pub siphon: Vec<usize>,
    pub rule: String,
}

pub fn boundedness(structure: &StructureSummary, assume_bounded: bool) -> Boundedness {
    if structure.conservative {
        Boundedness::Conservative
    } else if structure.complex_balanced_for_all_k {
        Boundedness::ComplexBalancedStructural
    } else if assume_bounded {
        Boundedness::AssumedByFlag
    } else {
        Boundedness::Unknown
    }
}

/// Status of one siphon. The full species set of a network that is complex
/// balanced for all rates is a vertex face and takes the vertex route
/// directly unless a conservation law already excludes it.
pub fn resolve_siphon(
    net: &Network,
    record: &SiphonRecord,
    structure: &StructureSummary,
    config: &CertifyConfig,
) -> SiphonStatus {
    if record.is_trivial && record.is_critical && structure.complex_balanced_for_all_k {
        return SiphonStatus::VertexOrEmpty;
    }
    certify_siphon(net, &record.species, config)
}

pub fn assemble_verdict<'a>(
    structure: &StructureSummary,
    boundedness: Boundedness,
    statuses: impl IntoIterator<Item = &'a SiphonStatus>,
) -> Verdict {
    if !statuses.into_iter().all(SiphonStatus::is_resolved) {
        Verdict::Inconclusive
    } else if !boundedness.is_bounded() {
        Verdict::PersistentIfBounded
    } else if structure.complex_balanced_for_all_k {
        Verdict::PersistentAndGAC
    } else {
        Verdict::Persistent
    }
}

pub fn rule_for(status: &SiphonStatus) -> String {
    match status {
        SiphonStatus::ExcludedByConservation { certificate, .. } => match certificate {
            Some(_) => "conservation law with full support (also certified with J = {})".into(),
            None => "conservation law inside the siphon".into(),
        },
        SiphonStatus::WdneCertified { certificate, via } => {
            let how = match via {
                CertificateRoute::FacetShortcut => "facet construction",
                CertificateRoute::Direct => "subset search",
            };
            format!("weakly dynamically non-emptiable via {how}, J = {}", pair_list(&certificate.pairs))
        }
        SiphonStatus::VertexOrEmpty => "vertex face of a complex balanced system".into(),
        SiphonStatus::Unresolved(d) => format!(
            "unresolved after {} attempts at epsilon = {}{}",
            d.attempts,
            d.epsilon,
            if d.cap_exceeded { " (subset cap reached)" } else { "" }
        ),
    }
}

pub fn analyze(net: &Network, config: &AnalysisConfig) -> Result<AnalysisReport, SiphonError> {
    let structure = summarize(net);
    let boundedness = boundedness(&structure, config.assume_bounded);
    let sets = enumerate_siphon_sets(net, false, config.siphon_cap)?;
    let certify = config.certify_config();
    let siphons: Vec<SiphonAnalysis> = sets
        .par_iter()
        .map(|set| {
            let record = classify(net, set);
            let status = resolve_siphon(net, &record, &structure, &certify);
            SiphonAnalysis { record, status }
        })
        .collect();
    let records: Vec<SiphonRecord> = siphons.iter().map(|s| s.record.clone()).collect();
    let verdict = assemble_verdict(&structure, boundedness, siphons.iter().map(|s| &s.status));
    let rule_trace = siphons
        .iter()
        .map(|s| TraceEntry {
            siphon: s.record.species.clone(),
            rule: rule_for(&s.status),
        })
        .collect();
    Ok(AnalysisReport {
        species: net.species().iter().map(|s| s.name.clone()).collect(),
        structure,
        boundedness,
        siphons,
        nested_critical_locking_sets: has_nested_critical_locking_sets(&records),
        verdict,
        rule_trace,
    })
}

fn pair_list(pairs: &[OrderPair]) -> String {
    let inner: Vec<String> = pairs.iter().map(ToString::to_string).collect();
    format!("{{{}}}", inner.join(","))
}

fn vector(v: &[Rational]) -> String {
    let inner: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", inner.join(", "))
}

#[derive(Serialize)]
struct StatusJson {
    kind: &'static str,
    via: Option<CertificateRoute>,
    #[serde(rename = "J")]
    pairs: Option<Vec<OrderPair>>,
    epsilon: Option<String>,
    c: Option<Vec<String>>,
    alpha: Option<Vec<String>>,
    witness: Option<Vec<String>>,
    conservation: Option<Vec<String>>,
    attempts: Option<usize>,
    cap_exceeded: Option<bool>,
    refutations: Option<Vec<Refutation>>,
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

impl StatusJson {
    fn new(status: &SiphonStatus) -> Self {
        let mut out = StatusJson {
            kind: status.kind(),
            via: None,
            pairs: None,
            epsilon: None,
            c: None,
            alpha: None,
            witness: None,
            conservation: None,
            attempts: None,
            cap_exceeded: None,
            refutations: None,
        };
        if let Some(cert) = status.certificate() {
            out.pairs = Some(cert.pairs.clone());
            out.epsilon = Some(cert.epsilon.to_string());
            out.c = Some(strings(&cert.c));
            out.alpha = Some(strings(&cert.alpha));
        }
        match status {
            SiphonStatus::ExcludedByConservation { conservation, .. } => {
                out.conservation = Some(strings(conservation));
            }
            SiphonStatus::WdneCertified { via, .. } => out.via = Some(*via),
            SiphonStatus::VertexOrEmpty => {}
            SiphonStatus::Unresolved(d) => {
                out.epsilon = Some(d.epsilon.to_string());
                if let Some(first) = d.refutations.first() {
                    out.pairs = Some(first.pairs.clone());
                    out.witness = Some(strings(&first.witness));
                }
                out.attempts = Some(d.attempts);
                out.cap_exceeded = Some(d.cap_exceeded);
                out.refutations = Some(d.refutations.clone());
            }
        }
        out
    }
}

#[derive(Serialize)]
struct SiphonJson {
    #[serde(rename = "I")]
    siphon: Vec<usize>,
    names: Vec<String>,
    locking: bool,
    critical: bool,
    trivial: bool,
    full_support_conservation: bool,
    face_dim: usize,
    facet: bool,
    vertex: bool,
    status: StatusJson,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    species: &'a [String],
    structure: &'a StructureSummary,
    boundedness: Boundedness,
    siphons: Vec<SiphonJson>,
    nested_critical_locking_sets: bool,
    verdict: Verdict,
    rule_trace: &'a [TraceEntry],
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        let siphons = self
            .siphons
            .iter()
            .map(|s| SiphonJson {
                siphon: s.record.species.iter().map(|i| i + 1).collect(),
                names: self.names(&s.record.species),
                locking: s.record.is_locking,
                critical: s.record.is_critical,
                trivial: s.record.is_trivial,
                full_support_conservation: s.record.has_full_support_conservation,
                face_dim: s.record.geometry.face_dim,
                facet: s.record.geometry.is_facet,
                vertex: s.record.geometry.is_vertex,
                status: StatusJson::new(&s.status),
            })
            .collect();
        let json = ReportJson {
            species: &self.species,
            structure: &self.structure,
            boundedness: self.boundedness,
            siphons,
            nested_critical_locking_sets: self.nested_critical_locking_sets,
            verdict: self.verdict,
            rule_trace: &self.rule_trace,
        };
        serde_json::to_string_pretty(&json).expect("report serializes") + "\n"
    }

    fn names(&self, set: &[usize]) -> Vec<String> {
        set.iter().map(|&i| self.species[i].clone()).collect()
    }

    fn set_label(&self, set: &[usize]) -> String {
        format!("{{{}}}", self.names(set).join(", "))
    }

    pub fn to_text(&self) -> String {
        let yes = |b: bool| if b { "yes" } else { "no" };
        let st = &self.structure;
        let mut out = String::new();
        let _ = writeln!(out, "Structure");
        let _ = writeln!(
            out,
            "  species {}, reactions {}, complexes {}, linkage classes {}",
            st.species, st.reactions, st.complexes, st.linkage_classes
        );
        let _ = writeln!(out, "  rank {}, deficiency {}", st.rank, st.deficiency);
        let _ = writeln!(out, "  weakly reversible: {}", yes(st.weakly_reversible));
        let _ = writeln!(out, "  conservative: {}", yes(st.conservative));
        if let Some(c) = &st.conservation_vector {
            let _ = writeln!(out, "  conservation vector: {}", vector(c));
        }
        let _ = writeln!(
            out,
            "  complex balanced for all rate constants: {}",
            yes(st.complex_balanced_for_all_k)
        );
        let _ = writeln!(out, "Boundedness: {:?}", self.boundedness);

        let _ = writeln!(out, "Siphons");
        if self.siphons.is_empty() {
            let _ = writeln!(out, "  none");
        }
        for s in &self.siphons {
            let r = &s.record;
            let mut tags = Vec::new();
            if r.is_locking {
                tags.push("locking");
            }
            tags.push(if r.is_critical { "critical" } else { "non-critical" });
            let shape = if r.geometry.is_vertex {
                " (vertex)"
            } else if r.geometry.is_facet {
                " (facet)"
            } else {
                ""
            };
            let _ = writeln!(
                out,
                "  {}  {}, face dimension {}{}",
                self.set_label(&r.species),
                tags.join(", "),
                r.geometry.face_dim,
                shape
            );
        }
        if self.nested_critical_locking_sets {
            let _ = writeln!(out, "  nested critical locking sets present");
        }

        let _ = writeln!(out, "Certification");
        for s in &self.siphons {
            let _ = writeln!(out, "  {}: {}", self.set_label(&s.record.species), rule_for(&s.status));
            if let Some(cert) = s.status.certificate() {
                let _ = writeln!(
                    out,
                    "      epsilon = {}, c = {}, alpha = {}",
                    cert.epsilon,
                    vector(&cert.c),
                    vector(&cert.alpha)
                );
            }
            match &s.status {
                SiphonStatus::ExcludedByConservation { conservation, .. } => {
                    let _ = writeln!(out, "      conservation vector {}", vector(conservation));
                }
                SiphonStatus::Unresolved(d) => {
                    for f in &d.refutations {
                        let _ = writeln!(
                            out,
                            "      J = {}: cone witness v = {}",
                            pair_list(&f.pairs),
                            vector(&f.witness)
                        );
                    }
                }
                _ => {}
            }
        }
        let _ = writeln!(out, "Verdict: {:?}", self.verdict);
        out
    }
}
