//! Subjective lexicons, intensifier weights and trigger word lists.
//!
//! Two sentiment file layouts are understood:
//!
//! * SO-CAL style: one file per PoS category, lines `word<TAB>score`.
//! * SentiStrength style: lines `term<TAB>score`, where a term ending in `*`
//!   matches any word starting with the part before the `*`.
//!
//! A bundle is usually assembled from a manifest of `key = value` lines, see
//! [`LexiconBundle::from_manifest`].

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

/// Default amount subtracted from the magnitude of a negated orientation.
pub const DEFAULT_ALPHA: f64 = 4.0;

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{origin}:{line}: {message}")]
    Parse {
        origin: String,
        line: usize,
        message: String,
    },
    #[error("duplicate entry {key:?}{}", pos.as_ref().map(|p| format!(" ({p})")).unwrap_or_default())]
    Duplicate { key: String, pos: Option<String> },
    #[error("{origin}: {message}")]
    Manifest { origin: String, message: String },
}

/// Word lists that trigger predicates can refer to by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WordListKind {
    Negators,
    Intensifiers,
    Adversatives,
    Irrealis,
}

impl WordListKind {
    pub const ALL: [WordListKind; 4] = [
        WordListKind::Negators,
        WordListKind::Intensifiers,
        WordListKind::Adversatives,
        WordListKind::Irrealis,
    ];

    pub fn name(self) -> &'static str {
        match self {
            WordListKind::Negators => "negators",
            WordListKind::Intensifiers => "intensifiers",
            WordListKind::Adversatives => "adversatives",
            WordListKind::Irrealis => "irrealis",
        }
    }
}

impl FromStr for WordListKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        WordListKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown word list {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SentimentEntry {
    /// Lowercased word, or a stem followed by `*`.
    pub key: String,
    pub pos: Option<String>,
    pub so: f64,
}

impl SentimentEntry {
    pub fn new(key: impl AsRef<str>, pos: Option<&str>, so: f64) -> Self {
        SentimentEntry {
            key: key.as_ref().to_lowercase(),
            pos: pos.map(str::to_uppercase),
            so,
        }
    }

    /// The prefix of a wildcard entry.
    pub fn stem(&self) -> Option<&str> {
        self.key.strip_suffix('*').filter(|s| !s.is_empty())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntensifierEntry {
    pub key: String,
    pub beta: f64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LexiconFormat {
    /// One file per category; every entry gets the given PoS qualifier.
    SoCal {
        pos: String,
    },
    SentiStrength,
}

/// A plain word list. Entries may carry an optional number (used as a
/// per-negator shift amount).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct WordList {
    terms: BTreeMap<String, Option<f64>>,
}

impl WordList {
    pub fn from_terms<I, S>(terms: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        WordList {
            terms: terms
                .into_iter()
                .map(|t| (t.as_ref().to_lowercase(), None))
                .collect(),
        }
    }

    /// Parses one term per line, optionally followed by a tab and a number.
    pub fn parse(text: &str, origin: &str) -> Result<Self, LexiconError> {
        let mut terms = BTreeMap::new();
        for (k, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() {
                continue;
            }
            let (term, amount) = match line.split_once('\t') {
                Some((term, rest)) if !rest.trim().is_empty() => {
                    let amount = parse_number(rest.trim(), origin, k + 1)?;
                    (term.trim(), Some(amount))
                }
                Some((term, _)) => (term.trim(), None),
                None => (line.trim(), None),
            };
            if terms.insert(term.to_lowercase(), amount).is_some() {
                return Err(LexiconError::Duplicate {
                    key: term.to_lowercase(),
                    pos: None,
                });
            }
        }
        Ok(WordList { terms })
    }

    pub fn contains(&self, form: &str) -> bool {
        self.terms.contains_key(&form.to_lowercase())
    }

    pub fn amount(&self, form: &str) -> Option<f64> {
        self.terms.get(&form.to_lowercase()).copied().flatten()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Option<f64>)> {
        self.terms.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

/// All lexical resources used by one analysis.
///
/// Lookups fold case, except emoticons which match exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct LexiconBundle {
    tagged: BTreeMap<(String, String), f64>,
    plain: BTreeMap<String, f64>,
    stems: BTreeMap<(String, Option<String>), f64>,
    emoticons: BTreeMap<String, f64>,
    intensifiers: Option<BTreeMap<String, f64>>,
    negators: Option<WordList>,
    adversatives: Option<WordList>,
    irrealis: Option<WordList>,
    alpha: f64,
}

impl Default for LexiconBundle {
    fn default() -> Self {
        LexiconBundle {
            tagged: BTreeMap::new(),
            plain: BTreeMap::new(),
            stems: BTreeMap::new(),
            emoticons: BTreeMap::new(),
            intensifiers: None,
            negators: None,
            adversatives: None,
            irrealis: None,
            alpha: DEFAULT_ALPHA,
        }
    }
}

impl LexiconBundle {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_sentiment<I>(&mut self, entries: I) -> Result<(), LexiconError>
    where
        I: IntoIterator<Item = SentimentEntry>,
    {
        for e in entries {
            let dup = if let Some(stem) = e.stem() {
                self.stems
                    .insert((stem.to_string(), e.pos.clone()), e.so)
                    .is_some()
            } else if let Some(pos) = &e.pos {
                self.tagged.insert((e.key.clone(), pos.clone()), e.so).is_some()
            } else {
                self.plain.insert(e.key.clone(), e.so).is_some()
            };
            if dup {
                return Err(LexiconError::Duplicate {
                    key: e.key,
                    pos: e.pos,
                });
            }
        }
        Ok(())
    }

    pub fn add_intensifiers<I>(&mut self, entries: I) -> Result<(), LexiconError>
    where
        I: IntoIterator<Item = IntensifierEntry>,
    {
        let map = self.intensifiers.get_or_insert_with(BTreeMap::new);
        for e in entries {
            if map.insert(e.key.to_lowercase(), e.beta).is_some() {
                return Err(LexiconError::Duplicate {
                    key: e.key,
                    pos: None,
                });
            }
        }
        Ok(())
    }

    pub fn add_emoticons<I>(&mut self, entries: I) -> Result<(), LexiconError>
    where
        I: IntoIterator<Item = (String, f64)>,
    {
        for (key, so) in entries {
            if self.emoticons.insert(key.clone(), so).is_some() {
                return Err(LexiconError::Duplicate { key, pos: None });
            }
        }
        Ok(())
    }

    /// Installs a word list. For [`WordListKind::Intensifiers`] the terms are
    /// registered with a zero weight unless they already have one.
    pub fn set_word_list(&mut self, kind: WordListKind, list: WordList) {
        match kind {
            WordListKind::Negators => self.negators = Some(list),
            WordListKind::Adversatives => self.adversatives = Some(list),
            WordListKind::Irrealis => self.irrealis = Some(list),
            WordListKind::Intensifiers => {
                let map = self.intensifiers.get_or_insert_with(BTreeMap::new);
                for (term, amount) in list.iter() {
                    map.entry(term.to_string()).or_insert(amount.unwrap_or(0.0));
                }
            }
        }
    }

    pub fn set_alpha(&mut self, alpha: f64) {
        self.alpha = alpha;
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Whether the named list has been provided (it may still be empty).
    pub fn has_list(&self, kind: WordListKind) -> bool {
        match kind {
            WordListKind::Negators => self.negators.is_some(),
            WordListKind::Intensifiers => self.intensifiers.is_some(),
            WordListKind::Adversatives => self.adversatives.is_some(),
            WordListKind::Irrealis => self.irrealis.is_some(),
        }
    }

    pub fn in_list(&self, kind: WordListKind, form: &str) -> bool {
        match kind {
            WordListKind::Negators => self.negators.as_ref().is_some_and(|l| l.contains(form)),
            WordListKind::Adversatives => self.adversatives.as_ref().is_some_and(|l| l.contains(form)),
            WordListKind::Irrealis => self.irrealis.as_ref().is_some_and(|l| l.contains(form)),
            WordListKind::Intensifiers => self.lookup_beta(form).is_some(),
        }
    }

    /// Semantic orientation of a word.
    ///
    /// Precedence: `(form, PoS)` entry, plain entry, longest matching stem,
    /// emoticon, then 0.
    pub fn lookup_so(&self, form: &str, upos: &str) -> f64 {
        let lower = form.to_lowercase();
        let pos = upos.to_uppercase();
        if let Some(&so) = self.tagged.get(&(lower.clone(), pos.clone())) {
            return so;
        }
        if let Some(&so) = self.plain.get(&lower) {
            return so;
        }
        if let Some(so) = self.lookup_stem(&lower, &pos) {
            return so;
        }
        self.emoticons.get(form).copied().unwrap_or(0.0)
    }

    fn lookup_stem(&self, lower: &str, pos: &str) -> Option<f64> {
        if self.stems.is_empty() {
            return None;
        }
        let mut ends: Vec<usize> = lower.char_indices().map(|(i, c)| i + c.len_utf8()).collect();
        ends.reverse();
        for end in ends {
            let prefix = &lower[..end];
            if let Some(&so) = self.stems.get(&(prefix.to_string(), Some(pos.to_string()))) {
                return Some(so);
            }
            if let Some(&so) = self.stems.get(&(prefix.to_string(), None)) {
                return Some(so);
            }
        }
        None
    }

    pub fn lookup_beta(&self, form: &str) -> Option<f64> {
        self.intensifiers
            .as_ref()
            .and_then(|m| m.get(&form.to_lowercase()).copied())
    }

    /// Shift amount for a negator: its own override, or the bundle α.
    pub fn negation_alpha(&self, form: &str) -> f64 {
        self.negators
            .as_ref()
            .and_then(|l| l.amount(form))
            .unwrap_or(self.alpha)
    }

    /// Reads a manifest of `key = value` lines. Paths are relative to the
    /// manifest's directory.
    ///
    /// Keys: `adjectives`, `nouns`, `verbs`, `adverbs` (SO-CAL files for
    /// ADJ/NOUN/VERB/ADV), `socal:<TAG>`, `sentistrength`, `emoticons`,
    /// `intensifiers`, `negators`, `adversatives`, `irrealis` and `alpha`.
    /// Sentiment and emoticon keys may repeat.
    pub fn from_manifest(path: impl AsRef<Path>) -> Result<Self, LexiconError> {
        let path = path.as_ref();
        let text = read(path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        let origin = path.display().to_string();

        let mut bundle = LexiconBundle::new();
        let mut seen = Vec::new();
        for (k, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let perr = |message: String| LexiconError::Parse {
                origin: origin.clone(),
                line: k + 1,
                message,
            };
            let (key, value) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| perr("expected key = value".into()))?;
            let once = matches!(
                key,
                "alpha" | "intensifiers" | "negators" | "adversatives" | "irrealis"
            );
            if once && seen.contains(&key.to_string()) {
                return Err(perr(format!("{key} given more than once")));
            }
            seen.push(key.to_string());

            let file = base.join(value);
            let socal_pos = match key {
                "adjectives" => Some("ADJ".to_string()),
                "nouns" => Some("NOUN".to_string()),
                "verbs" => Some("VERB".to_string()),
                "adverbs" => Some("ADV".to_string()),
                k => k.strip_prefix("socal:").map(str::to_uppercase),
            };
            if let Some(pos) = socal_pos {
                let entries = load_sentiment_lexicon(&file, &LexiconFormat::SoCal { pos })?;
                bundle.add_sentiment(entries)?;
                continue;
            }
            match key {
                "sentistrength" => {
                    let entries = load_sentiment_lexicon(&file, &LexiconFormat::SentiStrength)?;
                    bundle.add_sentiment(entries)?;
                }
                "emoticons" => {
                    let entries = load_emoticons(&file)?;
                    bundle.add_emoticons(entries)?;
                }
                "intensifiers" => {
                    let entries = load_intensifiers(&file)?;
                    bundle.add_intensifiers(entries)?;
                }
                "alpha" => {
                    bundle.alpha = parse_number(value, &origin, k + 1)?;
                }
                list => {
                    let kind: WordListKind = list.parse().map_err(perr)?;
                    let text = read(&file)?;
                    let wl = WordList::parse(&text, &file.display().to_string())?;
                    bundle.set_word_list(kind, wl);
                }
            }
        }
        Ok(bundle)
    }

    /// Dumps the bundle in a single-file canonical form readable by
    /// [`LexiconBundle::from_canonical`].
    pub fn to_canonical(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "alpha\t{}", self.alpha);
        for ((key, pos), so) in &self.tagged {
            let _ = writeln!(out, "sentiment\t{key}\t{pos}\t{so}");
        }
        for (key, so) in &self.plain {
            let _ = writeln!(out, "sentiment\t{key}\t_\t{so}");
        }
        for ((stem, pos), so) in &self.stems {
            let _ = writeln!(out, "sentiment\t{stem}*\t{}\t{so}", pos.as_deref().unwrap_or("_"));
        }
        for (key, so) in &self.emoticons {
            let _ = writeln!(out, "emoticon\t{key}\t{so}");
        }
        if let Some(map) = &self.intensifiers {
            let _ = writeln!(out, "list\tintensifiers");
            for (key, beta) in map {
                let _ = writeln!(out, "intensifier\t{key}\t{beta}");
            }
        }
        for (kind, list) in [
            (WordListKind::Negators, &self.negators),
            (WordListKind::Adversatives, &self.adversatives),
            (WordListKind::Irrealis, &self.irrealis),
        ] {
            if let Some(list) = list {
                let _ = writeln!(out, "list\t{}", kind.name());
                for (term, amount) in list.iter() {
                    let amount = amount.map_or("_".to_string(), |a| a.to_string());
                    let _ = writeln!(out, "term\t{}\t{term}\t{amount}", kind.name());
                }
            }
        }
        out
    }

    pub fn from_canonical(text: &str) -> Result<Self, LexiconError> {
        const ORIGIN: &str = "canonical lexicon";
        let mut bundle = LexiconBundle::new();
        let mut lists: BTreeMap<WordListKind, BTreeMap<String, Option<f64>>> = BTreeMap::new();
        for (k, line) in text.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let n = k + 1;
            let perr = |message: String| LexiconError::Parse {
                origin: ORIGIN.into(),
                line: n,
                message,
            };
            let f: Vec<&str> = line.split('\t').collect();
            match f.as_slice() {
                ["alpha", a] => bundle.alpha = parse_number(a, ORIGIN, n)?,
                ["sentiment", key, pos, so] => {
                    let pos = (*pos != "_").then_some(*pos);
                    let so = parse_number(so, ORIGIN, n)?;
                    bundle.add_sentiment([SentimentEntry::new(key, pos, so)])?;
                }
                ["emoticon", key, so] => {
                    let so = parse_number(so, ORIGIN, n)?;
                    bundle.add_emoticons([(key.to_string(), so)])?;
                }
                ["intensifier", key, beta] => {
                    let beta = parse_number(beta, ORIGIN, n)?;
                    bundle.add_intensifiers([IntensifierEntry {
                        key: key.to_string(),
                        beta,
                    }])?;
                }
                ["list", kind] => {
                    let kind: WordListKind = kind.parse().map_err(perr)?;
                    if kind == WordListKind::Intensifiers {
                        bundle.intensifiers.get_or_insert_with(BTreeMap::new);
                    } else {
                        lists.entry(kind).or_default();
                    }
                }
                ["term", kind, term, amount] => {
                    let kind: WordListKind = kind.parse().map_err(perr)?;
                    let amount = match *amount {
                        "_" => None,
                        a => Some(parse_number(a, ORIGIN, n)?),
                    };
                    lists.entry(kind).or_default().insert(term.to_string(), amount);
                }
                _ => return Err(perr(format!("unrecognised record {line:?}"))),
            }
        }
        for (kind, terms) in lists {
            bundle.set_word_list(kind, WordList { terms });
        }
        Ok(bundle)
    }
}

fn read(path: &Path) -> Result<String, LexiconError> {
    fs::read_to_string(path).map_err(|source| LexiconError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse_number(s: &str, origin: &str, line: usize) -> Result<f64, LexiconError> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| LexiconError::Parse {
            origin: origin.to_string(),
            line,
            message: format!("invalid number {s:?}"),
        })
}

/// Splits `key<TAB>value[<TAB>...]`, or `key value` on the last whitespace
/// run when the line has no tab.
fn split_pair<'a>(line: &'a str, origin: &str, line_no: usize) -> Result<(&'a str, &'a str), LexiconError> {
    let pair = if line.contains('\t') {
        let mut fields = line.split('\t');
        let key = fields.next().unwrap_or("");
        fields.next().map(|v| (key, v))
    } else {
        line.trim().rsplit_once(char::is_whitespace)
    };
    match pair {
        Some((k, v)) if !k.trim().is_empty() => Ok((k.trim(), v.trim())),
        _ => Err(LexiconError::Parse {
            origin: origin.to_string(),
            line: line_no,
            message: "expected a term and a score".into(),
        }),
    }
}

fn pairs(text: &str, origin: &str) -> Result<Vec<(String, f64)>, LexiconError> {
    let mut out = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let (key, value) = split_pair(line, origin, k + 1)?;
        out.push((key.to_string(), parse_number(value, origin, k + 1)?));
    }
    Ok(out)
}

pub fn parse_sentiment_lexicon(
    text: &str,
    format: &LexiconFormat,
    origin: &str,
) -> Result<Vec<SentimentEntry>, LexiconError> {
    let pos = match format {
        LexiconFormat::SoCal { pos } => Some(pos.as_str()),
        LexiconFormat::SentiStrength => None,
    };
    let mut seen = std::collections::HashSet::new();
    let mut entries = Vec::new();
    for (key, so) in pairs(text, origin)? {
        let entry = SentimentEntry::new(&key, pos, so);
        if !seen.insert(entry.key.clone()) {
            return Err(LexiconError::Duplicate {
                key: entry.key,
                pos: entry.pos,
            });
        }
        entries.push(entry);
    }
    Ok(entries)
}

pub fn load_sentiment_lexicon(
    path: impl AsRef<Path>,
    format: &LexiconFormat,
) -> Result<Vec<SentimentEntry>, LexiconError> {
    let path = path.as_ref();
    parse_sentiment_lexicon(&read(path)?, format, &path.display().to_string())
}

pub fn parse_intensifiers(text: &str, origin: &str) -> Result<Vec<IntensifierEntry>, LexiconError> {
    Ok(pairs(text, origin)?
        .into_iter()
        .map(|(key, beta)| IntensifierEntry {
            key: key.to_lowercase(),
            beta,
        })
        .collect())
}

pub fn load_intensifiers(path: impl AsRef<Path>) -> Result<Vec<IntensifierEntry>, LexiconError> {
    let path = path.as_ref();
    parse_intensifiers(&read(path)?, &path.display().to_string())
}

/// Emoticon tables keep their keys verbatim.
pub fn load_emoticons(path: impl AsRef<Path>) -> Result<Vec<(String, f64)>, LexiconError> {
    let path = path.as_ref();
    pairs(&read(path)?, &path.display().to_string())
}
