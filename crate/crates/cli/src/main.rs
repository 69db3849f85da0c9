use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use depsent::engine::fmt_so;
use depsent::eval::{ablation_with_jobs, load_concatenated_corpus, run_evaluation};
use depsent::ruleset::{select_rules, Amount};
use depsent::{
    builtin_rule_pack, builtin_universal_rules, load_corpus, load_rules_xml, parse_conll, parse_rules_xml,
    rules_to_xml, DepSentence, Engine, LabeledDocument, LexiconBundle, OperationSpec,
};

#[derive(Parser, Debug)]
#[command(
    name = "depsent",
    version,
    about = "Syntax-driven sentiment analysis over dependency trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Score CoNLL-U documents, one document per input file.
    Analyze {
        #[command(flatten)]
        setup: Setup,
        /// CoNLL-U files.
        #[arg(long, num_args = 1.., required = true)]
        input: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Records)]
        format: Format,
    },
    /// Accuracy on a labelled corpus.
    Evaluate {
        #[command(flatten)]
        setup: Setup,
        /// Corpus manifest (`id<TAB>label<TAB>path`) or a `.conllu` file
        /// with `# newdoc id` and `# label` comments.
        #[arg(long)]
        input: PathBuf,
        /// Report every cumulative rule step instead of one accuracy.
        #[arg(long)]
        ablation: bool,
        /// Worker threads; 0 picks one per core.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Show the full analysis of one sentence.
    Explain {
        #[command(flatten)]
        setup: Setup,
        #[arg(long)]
        input: PathBuf,
        /// 1-based sentence number within the input.
        #[arg(long, default_value_t = 1)]
        sentence: usize,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Check a rule file against the schema and list its operations.
    ValidateRules {
        #[arg(long)]
        rules: PathBuf,
        /// Also check that referenced word lists exist in this lexicon.
        #[arg(long)]
        lexicon: Option<PathBuf>,
    },
    /// Print the built-in rule pack as XML.
    EmitBuiltinRules,
}

#[derive(Args, Debug)]
struct Setup {
    /// Lexicon manifest.
    #[arg(long)]
    lexicon: PathBuf,
    /// Rule file, or `builtin`.
    #[arg(long, default_value = "builtin")]
    rules: String,
    /// Comma-separated operation names to keep.
    #[arg(long, value_delimiter = ',')]
    rules_subset: Option<Vec<String>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Records,
    Trace,
}

impl Setup {
    fn load(&self) -> Result<(LexiconBundle, Vec<OperationSpec>)> {
        let lex = LexiconBundle::from_manifest(&self.lexicon)
            .with_context(|| format!("loading lexicon {}", self.lexicon.display()))?;
        let rules = if self.rules == "builtin" {
            builtin_universal_rules(&lex)?
        } else {
            load_rules_xml(&self.rules, &lex).with_context(|| format!("loading rules {}", self.rules))?
        };
        let rules = match &self.rules_subset {
            Some(names) => {
                let names: Vec<&str> = names.iter().map(|n| n.trim()).filter(|n| !n.is_empty()).collect();
                select_rules(&rules, &names)?
            }
            None => rules,
        };
        Ok((lex, rules))
    }
}

fn read_sentences(path: &Path) -> Result<Vec<DepSentence>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_conll(&text).with_context(|| format!("parsing {}", path.display()))
}

fn document_id(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn analyze(setup: &Setup, inputs: &[PathBuf], format: Format) -> Result<String> {
    let (lex, rules) = setup.load()?;
    let engine = Engine::new(&rules, &lex);
    let mut out = String::new();
    for path in inputs {
        let id = document_id(path);
        let sentences = read_sentences(path)?;
        let doc = engine
            .analyze_document(&sentences)
            .with_context(|| format!("analysing {}", path.display()))?;
        match format {
            Format::Records => writeln!(out, "{}", doc.record(&id))?,
            Format::Table | Format::Trace => {
                for (k, res) in doc.sentences.iter().enumerate() {
                    writeln!(out, "# {id} sentence {} so = {}", k + 1, fmt_so(res.so))?;
                    if format == Format::Table {
                        out.push_str(&res.trace.render_table());
                    } else {
                        out.push_str(&res.trace.render_events());
                    }
                }
                writeln!(out, "{}", doc.record(&id))?;
            }
        }
    }
    Ok(out)
}

fn load_labelled(path: &Path) -> Result<Vec<LabeledDocument>> {
    let is_conll = path.extension().is_some_and(|e| e == "conllu" || e == "conll");
    let corpus = if is_conll {
        load_concatenated_corpus(path)
    } else {
        load_corpus(path)
    };
    corpus.with_context(|| format!("loading corpus {}", path.display()))
}

fn evaluate(setup: &Setup, input: &Path, ablation: bool, jobs: usize, format: Format) -> Result<String> {
    let corpus = load_labelled(input)?;
    if ablation {
        if setup.rules != "builtin" || setup.rules_subset.is_some() {
            bail!("--ablation uses the built-in operations; drop --rules and --rules-subset");
        }
        let lex = LexiconBundle::from_manifest(&setup.lexicon)
            .with_context(|| format!("loading lexicon {}", setup.lexicon.display()))?;
        builtin_universal_rules(&lex)?;
        let report = ablation_with_jobs(&corpus, &lex, jobs)?;
        return Ok(match format {
            Format::Records => report.to_key_values(),
            _ => report.to_table(),
        });
    }
    let (lex, rules) = setup.load()?;
    let eval = run_evaluation(&corpus, &Engine::new(&rules, &lex), jobs)?;
    let mut out = String::new();
    if format != Format::Table {
        for p in &eval.predictions {
            writeln!(out, "{}\t{}\t{}\t{}", p.id, fmt_so(p.so), p.predicted, p.gold)?;
        }
    }
    writeln!(
        out,
        "accuracy\t{:.4}\t{}/{}",
        eval.accuracy(),
        eval.correct,
        eval.total()
    )?;
    Ok(out)
}

fn explain(setup: &Setup, input: &Path, sentence: usize, format: Format) -> Result<String> {
    let (lex, rules) = setup.load()?;
    let sentences = read_sentences(input)?;
    let Some(s) = sentence.checked_sub(1).and_then(|k| sentences.get(k)) else {
        bail!(
            "{}: no sentence {sentence} (found {})",
            input.display(),
            sentences.len()
        );
    };
    let res = Engine::new(&rules, &lex).analyze_sentence(s);
    let mut out = String::new();
    match format {
        Format::Records => {}
        Format::Table => out.push_str(&res.trace.render_table()),
        Format::Trace => {
            out.push_str(&res.trace.render_table());
            out.push('\n');
            out.push_str(&res.trace.render_events());
        }
    }
    writeln!(out, "so\t{}", fmt_so(res.so))?;
    Ok(out)
}

fn amount_text(a: &Amount) -> String {
    match a {
        Amount::Literal(v) => v.to_string(),
        Amount::FromLexicon => "lexicon".into(),
    }
}

fn validate_rules(rules: &Path, lexicon: Option<&Path>) -> Result<String> {
    let specs = match lexicon {
        Some(path) => {
            let lex = LexiconBundle::from_manifest(path)
                .with_context(|| format!("loading lexicon {}", path.display()))?;
            load_rules_xml(rules, &lex).map_err(anyhow::Error::from)
        }
        None => std::fs::read_to_string(rules)
            .with_context(|| format!("reading {}", rules.display()))
            .and_then(|text| parse_rules_xml(&text, None).map_err(Into::into)),
    }
    .with_context(|| format!("validating {}", rules.display()))?;
    let mut out = format!("ok\t{} operations\n", specs.len());
    for op in &specs {
        let scopes: Vec<String> = op.scopes.iter().map(ToString::to_string).collect();
        writeln!(
            out,
            "{}\t{}({})\tlevelsup={}\tpriority={}\tscope={}",
            op.name,
            op.transform.kind.name(),
            amount_text(&op.transform.amount),
            op.levels_up,
            op.priority,
            scopes.join(",")
        )?;
    }
    Ok(out)
}

fn run(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Analyze { setup, input, format } => analyze(&setup, &input, format),
        Command::Evaluate {
            setup,
            input,
            ablation,
            jobs,
            format,
        } => evaluate(&setup, &input, ablation, jobs, format),
        Command::Explain {
            setup,
            input,
            sentence,
            format,
        } => explain(&setup, &input, sentence, format),
        Command::ValidateRules { rules, lexicon } => validate_rules(&rules, lexicon.as_deref()),
        Command::EmitBuiltinRules => Ok(rules_to_xml(&builtin_rule_pack())),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    // Output is buffered so that a failure never leaves partial results.
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout
                .write_all(out.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::FAILURE;
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("depsent: {e:#}");
            ExitCode::FAILURE
        }
    }
}
