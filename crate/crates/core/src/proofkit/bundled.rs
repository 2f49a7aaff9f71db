use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::syntax::Formula;

use super::script::{parse_script, ProofScript};

/// Bundled derivations as `(name, file name, text)`, in dependency order:
/// each script cites only theorems listed before it.
pub const BUNDLED: [(&str, &str, &str); 10] = [
    ("SYM", "SYM.selas", include_str!("../../proofs/SYM.selas")),
    ("TRANS", "TRANS.selas", include_str!("../../proofs/TRANS.selas")),
    ("DBASEQ", "DBASEQ.selas", include_str!("../../proofs/DBASEQ.selas")),
    (
        "NECAS'",
        "NECAS_prime.selas",
        include_str!("../../proofs/NECAS_prime.selas"),
    ),
    ("CNECAS", "CNECAS.selas", include_str!("../../proofs/CNECAS.selas")),
    ("EAS", "EAS.selas", include_str!("../../proofs/EAS.selas")),
    ("SUBASEQ", "SUBASEQ.selas", include_str!("../../proofs/SUBASEQ.selas")),
    ("EX", "EX.selas", include_str!("../../proofs/EX.selas")),
    ("T", "T.selas", include_str!("../../proofs/T.selas")),
    (
        "RELETTER",
        "reletter.selas",
        include_str!("../../proofs/reletter.selas"),
    ),
];

fn parsed() -> &'static BTreeMap<&'static str, ProofScript> {
    static SCRIPTS: OnceLock<BTreeMap<&'static str, ProofScript>> = OnceLock::new();
    SCRIPTS.get_or_init(|| {
        BUNDLED
            .iter()
            .map(|(name, file, text)| {
                let script = parse_script(text).unwrap_or_else(|e| panic!("bundled {file}: {e}"));
                (*name, script)
            })
            .collect()
    })
}

pub fn bundled_theorems() -> BTreeMap<&'static str, ProofScript> {
    parsed().clone()
}

pub fn bundled_script(name: &str) -> Option<&'static ProofScript> {
    parsed().get(name)
}

/// Goal of the bundled theorem `name`, the formula a lemma citation
/// instantiates.
pub fn lemma_goal(name: &str) -> Option<Formula> {
    bundled_script(name).map(|s| s.goal.clone())
}
