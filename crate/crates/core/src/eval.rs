//! Accuracy and rule ablation over labelled review corpora.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use thiserror::Error;

use crate::deptree::{parse_conll, ConllError, DepSentence};
use crate::engine::{Engine, Polarity};
use crate::lexicon::LexiconBundle;
use crate::ruleset::{builtin_rule_pack, select_rules, RuleError, BUT, INTENSIFICATION, IRREALIS, NEGATION};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{origin}:{line}: {message}")]
    Manifest {
        origin: String,
        line: usize,
        message: String,
    },
    #[error("{}: {source}", path.display())]
    Conll {
        path: PathBuf,
        #[source]
        source: ConllError,
    },
    #[error("document {0:?} has no sentences")]
    EmptyDocument(String),
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error(transparent)]
    Rules(#[from] RuleError),
    #[error("cannot build worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDocument {
    pub id: String,
    pub gold: Polarity,
    pub sentences: Vec<DepSentence>,
}

/// Reads a manifest of `id<TAB>label<TAB>path` lines, one CoNLL file per
/// document. Paths are relative to the manifest. Blank lines and lines
/// starting with `#` are ignored.
pub fn load_corpus(manifest: impl AsRef<Path>) -> Result<Vec<LabeledDocument>, EvalError> {
    let manifest = manifest.as_ref();
    let text = read(manifest)?;
    let base = manifest.parent().unwrap_or(Path::new("."));
    let origin = manifest.display().to_string();
    let mut docs = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let merr = |message: String| EvalError::Manifest {
            origin: origin.clone(),
            line: k + 1,
            message,
        };
        let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
        let [id, label, path] = fields.as_slice() else {
            return Err(merr(format!(
                "expected 3 tab-separated fields, found {}",
                fields.len()
            )));
        };
        let gold: Polarity = label.parse().map_err(merr)?;
        let path = base.join(path);
        let sentences = parse_conll(&read(&path)?).map_err(|source| EvalError::Conll {
            path: path.clone(),
            source,
        })?;
        if sentences.is_empty() {
            return Err(EvalError::EmptyDocument(id.to_string()));
        }
        docs.push(LabeledDocument {
            id: id.to_string(),
            gold,
            sentences,
        });
    }
    Ok(docs)
}

/// Splits one CoNLL stream into documents. A sentence preceded by a
/// `# newdoc id = <id>` comment opens a new document; its label comes from a
/// `# label = positive|negative` comment on the same sentence.
pub fn parse_concatenated_corpus(text: &str, origin: &str) -> Result<Vec<LabeledDocument>, EvalError> {
    let sentences = parse_conll(text).map_err(|source| EvalError::Conll {
        path: PathBuf::from(origin),
        source,
    })?;
    let mut docs: Vec<LabeledDocument> = Vec::new();
    for (k, s) in sentences.into_iter().enumerate() {
        let value = |key: &str| {
            s.comments().iter().find_map(|c| {
                let (k, v) = c.split_once('=')?;
                (k.trim() == key).then(|| v.trim().to_string())
            })
        };
        if let Some(id) = value("newdoc id") {
            let label = value("label").ok_or_else(|| EvalError::Manifest {
                origin: origin.to_string(),
                line: k + 1,
                message: format!("document {id:?} has no label comment"),
            })?;
            let gold = label.parse().map_err(|message| EvalError::Manifest {
                origin: origin.to_string(),
                line: k + 1,
                message,
            })?;
            docs.push(LabeledDocument {
                id,
                gold,
                sentences: Vec::new(),
            });
        }
        match docs.last_mut() {
            Some(d) => d.sentences.push(s),
            None => {
                return Err(EvalError::Manifest {
                    origin: origin.to_string(),
                    line: k + 1,
                    message: "sentence before the first newdoc comment".into(),
                })
            }
        }
    }
    Ok(docs)
}

pub fn load_concatenated_corpus(path: impl AsRef<Path>) -> Result<Vec<LabeledDocument>, EvalError> {
    let path = path.as_ref();
    parse_concatenated_corpus(&read(path)?, &path.display().to_string())
}

fn read(path: &Path) -> Result<String, EvalError> {
    fs::read_to_string(path).map_err(|source| EvalError::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub id: String,
    pub gold: Polarity,
    pub so: f64,
    pub predicted: Polarity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    /// In corpus order.
    pub predictions: Vec<Prediction>,
    pub correct: usize,
}

impl Evaluation {
    pub fn total(&self) -> usize {
        self.predictions.len()
    }

    pub fn accuracy(&self) -> f64 {
        self.correct as f64 / self.total() as f64
    }
}

/// Classifies every document, using `jobs` worker threads (0 = rayon's
/// default).
pub fn run_evaluation(
    corpus: &[LabeledDocument],
    engine: &Engine<'_>,
    jobs: usize,
) -> Result<Evaluation, EvalError> {
    if corpus.is_empty() {
        return Err(EvalError::EmptyCorpus);
    }
    let classify = |doc: &LabeledDocument| -> Result<Prediction, EvalError> {
        let res = engine
            .analyze_document(&doc.sentences)
            .map_err(|_| EvalError::EmptyDocument(doc.id.clone()))?;
        Ok(Prediction {
            id: doc.id.clone(),
            gold: doc.gold,
            so: res.so,
            predicted: res.polarity,
        })
    };
    let predictions: Vec<Prediction> = if jobs == 1 {
        corpus.iter().map(classify).collect::<Result<_, _>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| EvalError::Pool(e.to_string()))?;
        pool.install(|| corpus.par_iter().map(classify).collect::<Result<_, _>>())?
    };
    let correct = predictions.iter().filter(|p| p.gold == p.predicted).count();
    Ok(Evaluation { predictions, correct })
}

/// Fraction of documents whose predicted polarity matches the gold label.
pub fn evaluate(
    corpus: &[LabeledDocument],
    rules: &[crate::ruleset::OperationSpec],
    lex: &LexiconBundle,
) -> Result<f64, EvalError> {
    run_evaluation(corpus, &Engine::new(rules, lex), 1).map(|e| e.accuracy())
}

/// Cumulative rule subsets of the universal pack. The intensification row
/// also brings in the adversative rule.
pub const ABLATION_STEPS: [(&str, &[&str]); 4] = [
    ("baseline", &[]),
    ("+negation", &[NEGATION]),
    ("+intensification", &[NEGATION, INTENSIFICATION, BUT]),
    ("+irrealis", &[NEGATION, INTENSIFICATION, BUT, IRREALIS]),
];

#[derive(Debug, Clone, PartialEq)]
pub struct AblationRow {
    pub name: String,
    pub correct: usize,
    pub total: usize,
}

impl AblationRow {
    pub fn accuracy(&self) -> f64 {
        self.correct as f64 / self.total as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AblationReport {
    pub rows: Vec<AblationRow>,
}

impl AblationReport {
    pub fn accuracy(&self, name: &str) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.name == name)
            .map(AblationRow::accuracy)
    }

    /// Aligned text table with accuracies in percent.
    pub fn to_table(&self) -> String {
        let width = self.rows.iter().map(|r| r.name.len()).max().unwrap_or(0).max(13);
        let mut out =
            String::from("# cumulative rule subsets; +intensification includes the adversative (but) rule\n");
        let _ = writeln!(
            out,
            "{:<width$}  {:>8}  {:>9}",
            "configuration", "accuracy", "correct"
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:<width$}  {:>8.2}  {:>9}",
                r.name,
                100.0 * r.accuracy(),
                format!("{}/{}", r.correct, r.total)
            );
        }
        out
    }

    /// `name=accuracy` lines, accuracy as a fraction.
    pub fn to_key_values(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            let _ = writeln!(out, "{}={:.6}", r.name, r.accuracy());
        }
        out
    }
}

pub fn ablation(corpus: &[LabeledDocument], lex: &LexiconBundle) -> Result<AblationReport, EvalError> {
    ablation_with_jobs(corpus, lex, 1)
}

pub fn ablation_with_jobs(
    corpus: &[LabeledDocument],
    lex: &LexiconBundle,
    jobs: usize,
) -> Result<AblationReport, EvalError> {
    let pack = builtin_rule_pack();
    let mut rows = Vec::new();
    for (name, subset) in ABLATION_STEPS {
        let rules = select_rules(&pack, subset)?;
        let eval = run_evaluation(corpus, &Engine::new(&rules, lex), jobs)?;
        rows.push(AblationRow {
            name: name.to_string(),
            correct: eval.correct,
            total: eval.total(),
        });
    }
    Ok(AblationReport { rows })
}
