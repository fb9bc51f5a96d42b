//! The bundled derivations and certificates, embedded at build time.

use crate::kernel::{parse_script, ProofScript};

/// A bundled file: its path relative to the corpus root and its contents.
#[derive(Clone, Copy, Debug)]
pub struct CorpusFile {
    pub path: &'static str,
    pub text: &'static str,
}

macro_rules! bundled {
    ($($path:literal),* $(,)?) => {
        &[$(CorpusFile { path: $path, text: include_str!(concat!("../corpus/", $path)) }),*]
    };
}

pub const SCRIPTS: &[CorpusFile] = bundled![
    "cc/russell_not_notin.proof",
    "cc/russell_box_bot.proof",
    "cc/distinct_concepts.proof",
    "cc1/abs_self_member.proof",
    "cc1/abs_equal_to.proof",
    "cc1/abs_mutual.proof",
    "cc1/abs_comparable.proof",
    "cc1/abs_linked.proof",
    "cc2/zero_in_omega.proof",
    "cc2/succ_closed.proof",
    "cc2/succ_nonzero.proof",
    "cc2/succ_injective.proof",
    "cc2/induction_transport.proof",
];

pub const CERTIFICATES: &[CorpusFile] = bundled!["cc1_comp.cert", "cc2_pa2.cert"];

/// Looks a bundled file up by its corpus path.
pub fn file(path: &str) -> Option<&'static str> {
    SCRIPTS
        .iter()
        .chain(CERTIFICATES)
        .find(|f| f.path == path)
        .map(|f| f.text)
}

/// Parses a bundled script. Panics if the path is unknown or the file is
/// malformed, both of which are build errors.
pub fn script(path: &str) -> ProofScript {
    let text = file(path).unwrap_or_else(|| panic!("no bundled script {path}"));
    parse_script(text).unwrap_or_else(|e| panic!("{path}: {e}"))
}

/// Resolves certificate `proof:` paths against the bundled corpus.
pub fn loader(path: &str) -> Result<String, String> {
    file(path)
        .map(str::to_string)
        .ok_or_else(|| format!("no bundled file `{path}`"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::check_proof;

    #[test]
    fn every_bundled_script_checks() {
        for f in SCRIPTS {
            let s = script(f.path);
            assert!(check_proof(&s).is_accepted(), "{}: {:?}", f.path, check_proof(&s));
        }
    }
}
