//! Reading and writing the plain-text code file format: an optional header
//! comment `# n=4 q=<q> size=<N> kind=<optimal|perfect>`, then one word per
//! line as four space-separated decimal letters.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use delcode::{Code, Letter, Word};

/// A code file's contents plus whatever its header declared.
#[derive(Debug)]
pub struct ParsedCodeFile {
    pub code: Code,
    /// Declared kind, when a header was present: "optimal" or "perfect".
    pub kind: Option<String>,
}

struct Header {
    line: usize,
    n: Option<usize>,
    q: Option<Letter>,
    size: Option<usize>,
    kind: Option<String>,
}

/// Renders a code with its header; words appear in sorted order so repeated
/// runs produce identical bytes.
pub fn render_code_file(code: &Code, kind: &str) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "# n={} q={} size={} kind={kind}",
        code.n(),
        code.q(),
        code.len()
    )
    .unwrap();
    for w in code.words() {
        writeln!(out, "{w}").unwrap();
    }
    out
}

/// Reads and checks a code file. The error string is a ready-to-print
/// diagnostic; parse problems carry `path:line:` positions.
pub fn read_code_file(path: &Path) -> Result<ParsedCodeFile, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_code_text(&text, &path.display().to_string())
}

fn parse_header(rest: &str, origin: &str, line: usize) -> Result<Option<Header>, String> {
    let tokens: Vec<&str> = rest.split_whitespace().collect();
    if tokens.first().map_or(true, |t| !t.starts_with("n=")) {
        // A plain comment, not a header.
        return Ok(None);
    }
    let mut header = Header {
        line,
        n: None,
        q: None,
        size: None,
        kind: None,
    };
    for tok in tokens {
        let (key, value) = tok
            .split_once('=')
            .ok_or_else(|| format!("{origin}:{line}: malformed header token {tok:?}"))?;
        let bad = |what: &str| format!("{origin}:{line}: header {what} {value:?} is not valid");
        match key {
            "n" => header.n = Some(value.parse().map_err(|_| bad("n"))?),
            "q" => header.q = Some(value.parse().map_err(|_| bad("q"))?),
            "size" => header.size = Some(value.parse().map_err(|_| bad("size"))?),
            "kind" => {
                if value != "optimal" && value != "perfect" {
                    return Err(format!(
                        "{origin}:{line}: header kind must be \"optimal\" or \"perfect\", got {value:?}"
                    ));
                }
                header.kind = Some(value.to_string());
            }
            _ => return Err(format!("{origin}:{line}: unknown header key {key:?}")),
        }
    }
    Ok(Some(header))
}

fn parse_code_text(text: &str, origin: &str) -> Result<ParsedCodeFile, String> {
    let mut header: Option<Header> = None;
    let mut words: Vec<Word> = Vec::new();
    let mut seen: BTreeSet<Word> = BTreeSet::new();
    let mut max_letter: Letter = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('#') {
            if header.is_none() && words.is_empty() {
                header = parse_header(rest, origin, line)?;
            }
            continue;
        }
        let mut letters: Vec<Letter> = Vec::with_capacity(4);
        for tok in trimmed.split_whitespace() {
            let l: Letter = tok
                .parse()
                .map_err(|_| format!("{origin}:{line}: bad letter {tok:?}"))?;
            letters.push(l);
            max_letter = max_letter.max(l);
        }
        if letters.len() != 4 {
            return Err(format!(
                "{origin}:{line}: expected 4 letters per word, found {}",
                letters.len()
            ));
        }
        if let Some(q) = header.as_ref().and_then(|h| h.q) {
            if let Some(&l) = letters.iter().find(|&&l| l >= q) {
                return Err(format!(
                    "{origin}:{line}: letter {l} outside the declared alphabet of size {q}"
                ));
            }
        }
        let w = Word::new(letters);
        if !seen.insert(w.clone()) {
            return Err(format!("{origin}:{line}: duplicate word {w}"));
        }
        words.push(w);
    }

    if words.is_empty() {
        return Err(format!("{origin}: no words found"));
    }
    if let Some(h) = &header {
        if let Some(n) = h.n {
            if n != 4 {
                return Err(format!(
                    "{origin}:{}: only n=4 is supported, header says n={n}",
                    h.line
                ));
            }
        }
        if let Some(size) = h.size {
            if size != words.len() {
                return Err(format!(
                    "{origin}:{}: header size {size} does not match {} words",
                    h.line,
                    words.len()
                ));
            }
        }
    }

    // Without a declared alphabet, take the smallest even size that fits.
    let q = match header.as_ref().and_then(|h| h.q) {
        Some(q) => q,
        None => {
            let needed = max_letter + 1;
            needed + needed % 2
        }
    };
    let code = Code::from_words(4, q, words).map_err(|e| format!("{origin}: {e}"))?;
    Ok(ParsedCodeFile {
        code,
        kind: header.and_then(|h| h.kind),
    })
}
