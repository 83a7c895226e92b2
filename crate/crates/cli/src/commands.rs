//! One function per subcommand.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc as Shared;

use phonlat_core::automata::text::format_weight;
use phonlat_core::ctc::{homophone_mle, PhonemeAlphabet};
use phonlat_core::decode::{decode_batch, DecodeConfig};
use phonlat_core::graphs::{
    self, build_ctc_fst, build_grammar_fst, build_lexicon_fst, build_unigram_fst, Lexicon, VocabFrequency,
};
use phonlat_core::lm::{parse_arpa, parse_corpus, serialize_arpa, train_katz};
use phonlat_core::metrics::{bootstrap_se, confusion_counts, edit_distance, error_rate, tokenize, Unit};
use phonlat_core::simulate::{simulate_posteriors, SimulationConfig};

use crate::fail::Failure;
use crate::files::{
    keyed_lines, read_alphabet, read_fst, read_posteriors, read_symbols, read_text, write_atomic, write_fst,
};
use crate::{BuildGrammar, BuildLexicon, CompileTlg, Decode, DemoHomophone, Score, Simulate, TrainLm, UnitArg};

pub fn build_lexicon(a: BuildLexicon) -> Result<(), Failure> {
    let alphabet = read_alphabet(a.alphabet.as_deref())?;
    let lexicon = Lexicon::from_text(&read_text(&a.lexicon)?, alphabet.clone()).map_err(Failure::at(&a.lexicon))?;
    let silence = if a.silence {
        let path = a.alphabet.as_deref().unwrap_or(Path::new("<default inventory>"));
        Some(alphabet.silence_id().ok_or_else(|| Failure::data(path, None, "alphabet has no `sil` token"))?)
    } else {
        None
    };
    let l = build_lexicon_fst(&lexicon, silence).map_err(Failure::at(&a.lexicon))?;
    write_fst(&a.out, &l)
}

pub fn train_lm(a: TrainLm) -> Result<(), Failure> {
    let corpus = parse_corpus(&read_text(&a.corpus)?);
    let lm = train_katz(&corpus, a.order, a.k).map_err(Failure::at(&a.corpus))?;
    write_atomic(&a.out, serialize_arpa(&lm).as_bytes())
}

pub fn build_grammar(a: BuildGrammar) -> Result<(), Failure> {
    let words = read_symbols(&a.words)?;
    let g = match (&a.arpa, &a.freq) {
        (Some(arpa), _) => {
            let lm = parse_arpa(&read_text(arpa)?).map_err(Failure::at(arpa))?;
            build_grammar_fst(&lm, &words).map_err(Failure::at(arpa))?
        }
        (None, Some(freq)) => {
            let freqs = VocabFrequency::from_text(&read_text(freq)?).map_err(Failure::at(freq))?;
            build_unigram_fst(&freqs, a.alpha, &words).map_err(|e| match e {
                graphs::GraphError::InvalidSmoothing(_) => Failure::usage(e.to_string()),
                e => Failure::at(freq)(e),
            })?
        }
        (None, None) => unreachable!("clap requires a grammar source"),
    };
    write_fst(&a.out, &g)
}

pub fn compile_tlg(a: CompileTlg) -> Result<(), Failure> {
    let alphabet = read_alphabet(a.alphabet.as_deref())?;
    let l = read_fst(&a.lexicon_fst)?;
    let g = read_fst(&a.grammar)?;
    if **l.isymbols() != alphabet.phoneme_symbols() {
        return Err(Failure::data(&a.lexicon_fst, None, "lexicon machine was built for a different alphabet"));
    }
    if l.osymbols() != g.isymbols() {
        return Err(Failure::data(&a.grammar, None, "grammar words differ from the lexicon's output symbols"));
    }
    let tlg = graphs::compile_tlg(&build_ctc_fst(&alphabet), &l, &g).map_err(Failure::at(&a.grammar))?;
    write_fst(&a.out, &tlg)
}

fn utterance_id(path: &Path) -> Result<String, Failure> {
    path.file_stem()
        .and_then(|s| s.to_str())
        .map(str::to_string)
        .ok_or_else(|| Failure::data(path, None, "file name is not a valid utterance id"))
}

pub fn decode(a: Decode) -> Result<(), Failure> {
    let cfg = DecodeConfig {
        beam_width: a.beam,
        acoustic_scale: a.acoustic_scale,
        word_insertion_penalty: a.wip,
        nbest: a.nbest,
    };
    cfg.validate().map_err(|e| Failure::usage(e.to_string()))?;
    let parallelism = match a.parallel {
        Some(0) => return Err(Failure::usage("--parallel must be at least 1")),
        Some(n) => n,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let graph = read_fst(&a.graph)?;
    let alphabet = Shared::new(PhonemeAlphabet::from_frame_symbols(graph.isymbols()).map_err(Failure::at(&a.graph))?);
    let mut ids = BTreeSet::new();
    let mut utterances = Vec::with_capacity(a.posteriors.len());
    for path in &a.posteriors {
        let id = utterance_id(path)?;
        if !ids.insert(id.clone()) {
            return Err(Failure::data(path, None, format!("duplicate utterance id `{id}`")));
        }
        utterances.push((id, read_posteriors(path, alphabet.clone())?));
    }
    let posteriors: Vec<_> = utterances.iter().map(|(_, p)| p.clone()).collect();
    let results = decode_batch(&posteriors, &graph, &cfg, parallelism).map_err(|e| Failure::usage(e.to_string()))?;

    let words = graph.osymbols();
    let mut out = String::new();
    for ((id, _), (path, result)) in utterances.iter().zip(a.posteriors.iter().zip(results)) {
        let hyps = result.map_err(Failure::at(path))?;
        if hyps.is_empty() {
            eprintln!("phonlat: {}: no complete hypothesis", path.display());
            if cfg.nbest > 1 {
                let _ = writeln!(out, "{id}\t1\tinf\t");
            } else {
                let _ = writeln!(out, "{id}\tinf\t");
            }
        }
        for (rank, h) in hyps.iter().enumerate() {
            let cost = format_weight(h.cost);
            if cfg.nbest > 1 {
                let _ = writeln!(out, "{id}\t{}\t{cost}\t{}", rank + 1, h.text(words));
            } else {
                let _ = writeln!(out, "{id}\t{cost}\t{}", h.text(words));
            }
        }
    }
    emit(a.out.as_deref(), &out)
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => write_atomic(p, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Utterance id to token text. Accepts `id<TAB>tokens`, decoder output
/// (`id<TAB>cost<TAB>words`) and n-best output, keeping rank 1.
type Transcripts = (Vec<String>, BTreeMap<String, (usize, String)>);

fn read_transcripts(path: &Path) -> Result<Transcripts, Failure> {
    let text = read_text(path)?;
    let mut order = Vec::new();
    let mut map = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line_no = n + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = if line.contains('\t') {
            line.split('\t').collect()
        } else {
            let trimmed = line.trim();
            match trimmed.split_once(char::is_whitespace) {
                Some((id, rest)) => vec![id, rest],
                None => vec![trimmed],
            }
        };
        let (id, tokens) = match fields.as_slice() {
            [id] => (*id, ""),
            [id, tokens] => (*id, *tokens),
            [id, cost, words] if cost.parse::<f64>().is_ok() => (*id, *words),
            [id, rank, cost, words] if cost.parse::<f64>().is_ok() => match rank.parse::<usize>() {
                Ok(1) => (*id, *words),
                Ok(_) => continue,
                Err(_) => return Err(Failure::data(path, Some(line_no), format!("bad rank `{rank}`"))),
            },
            _ => return Err(Failure::data(path, Some(line_no), "expected `utt_id<TAB>tokens`")),
        };
        let id = id.trim();
        if id.is_empty() {
            return Err(Failure::data(path, Some(line_no), "missing utterance id"));
        }
        if map.insert(id.to_string(), (line_no, tokens.to_string())).is_some() {
            return Err(Failure::data(path, Some(line_no), format!("duplicate utterance id `{id}`")));
        }
        order.push(id.to_string());
    }
    Ok((order, map))
}

pub fn score(a: Score) -> Result<(), Failure> {
    let unit = match a.unit {
        UnitArg::Word => Unit::Word,
        UnitArg::Char => Unit::Char,
        UnitArg::Phoneme => Unit::Phoneme,
    };
    if a.bootstrap != 0 && a.bootstrap < phonlat_core::metrics::MIN_RESAMPLES {
        return Err(Failure::usage(format!(
            "--bootstrap must be 0 or at least {}",
            phonlat_core::metrics::MIN_RESAMPLES
        )));
    }
    let (order, refs) = read_transcripts(&a.reference)?;
    let (_, mut hyps) = read_transcripts(&a.hypothesis)?;
    let mut pairs = Vec::with_capacity(order.len());
    for id in &order {
        let (line, reference) = &refs[id];
        let Some((_, hypothesis)) = hyps.remove(id) else {
            return Err(Failure::data(&a.reference, Some(*line), format!("no hypothesis for `{id}`")));
        };
        pairs.push((tokenize(reference, unit), tokenize(&hypothesis, unit)));
    }
    if let Some((id, (line, _))) = hyps.into_iter().next() {
        return Err(Failure::data(&a.hypothesis, Some(line), format!("`{id}` has no reference")));
    }
    let mut report = error_rate(&pairs).map_err(Failure::at(&a.reference))?;
    if a.bootstrap > 0 {
        report.standard_error = Some(bootstrap_se(&pairs, a.bootstrap, a.seed).map_err(Failure::at(&a.reference))?);
    }

    if a.confusion.is_some() || a.profile.is_some() {
        let labels: Vec<String> =
            pairs.iter().flat_map(|(r, h)| r.iter().chain(h)).cloned().collect::<BTreeSet<_>>().into_iter().collect();
        let index: BTreeMap<&str, usize> = labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        let ids = |ts: &[String]| ts.iter().map(|t| index[t.as_str()]).collect::<Vec<_>>();
        let traces: Vec<_> = pairs.iter().map(|(r, h)| edit_distance(&ids(r), &ids(h)).1).collect();
        let summary = confusion_counts(&traces, labels.len()).map_err(Failure::at(&a.reference))?;
        if let Some(p) = &a.confusion {
            write_atomic(p, summary.to_csv(&labels).map_err(Failure::at(p))?.as_bytes())?;
        }
        if let Some(p) = &a.profile {
            write_atomic(p, summary.profile_csv(&labels).map_err(Failure::at(p))?.as_bytes())?;
        }
    }

    let (name, unit_name) = match unit {
        Unit::Word => ("WER", "word"),
        Unit::Char => ("CER", "char"),
        Unit::Phoneme => ("PER", "phoneme"),
    };
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{name} {:.2}% ({} errors / {} reference tokens, {} utterances)",
        100.0 * report.rate,
        report.total_edits,
        report.total_ref_len,
        pairs.len()
    );
    if let Some(se) = report.standard_error {
        let _ =
            writeln!(out, "bootstrap standard error {:.2}% ({} resamples, seed {})", 100.0 * se, a.bootstrap, a.seed);
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "unit={unit_name}");
    let _ = writeln!(out, "utterances={}", pairs.len());
    let _ = writeln!(out, "errors={}", report.total_edits);
    let _ = writeln!(out, "reference_length={}", report.total_ref_len);
    let _ = writeln!(out, "rate={:.6}", report.rate);
    if let Some(se) = report.standard_error {
        let _ = writeln!(out, "standard_error={se:.6}");
        let _ = writeln!(out, "resamples={}", a.bootstrap);
        let _ = writeln!(out, "seed={}", a.seed);
    }
    emit(a.out.as_deref(), &out)
}

pub fn demo_homophone(a: DemoHomophone) -> Result<(), Failure> {
    let (_, support) = homophone_mle(&a.words).map_err(|e| Failure::usage(e.to_string()))?;
    let mut out = String::from("string\tprobability\n");
    for (s, p) in support {
        let _ = writeln!(out, "{s}\t{p:.9}");
    }
    print!("{out}");
    Ok(())
}

pub fn simulate(a: Simulate) -> Result<(), Failure> {
    let alphabet = read_alphabet(a.alphabet.as_deref())?;
    let cfg = |seed: u64| SimulationConfig {
        frames_per_token: a.frames_per_token,
        blank_fraction: a.blank_fraction,
        noise_temperature: a.temperature,
        seed,
    };
    let encode =
        |p: &phonlat_core::ctc::PosteriorSequence| if a.binary { p.to_binary() } else { p.to_text().into_bytes() };

    if let Some(phonemes) = &a.phonemes {
        let out = a.out.as_ref().expect("clap requires --out");
        let tokens = alphabet.parse_tokens(phonemes).map_err(|e| Failure::usage(e.to_string()))?;
        let p =
            simulate_posteriors(&tokens, alphabet.clone(), &cfg(a.seed)).map_err(|e| Failure::usage(e.to_string()))?;
        return write_atomic(out, &encode(&p));
    }

    let transcripts = a.transcripts.as_ref().expect("clap requires an input");
    let lexicon_path = a.lexicon.as_ref().expect("clap requires --lexicon");
    let out_dir = a.out_dir.as_ref().expect("clap requires --out-dir");
    let lexicon = Lexicon::from_text(&read_text(lexicon_path)?, alphabet.clone()).map_err(Failure::at(lexicon_path))?;
    std::fs::create_dir_all(out_dir).map_err(Failure::io(out_dir))?;
    let extension = if a.binary { "bin" } else { "post" };
    for (i, (line, id, text)) in keyed_lines(transcripts, &read_text(transcripts)?)?.into_iter().enumerate() {
        let mut tokens = Vec::new();
        for word in text.split_whitespace() {
            let pron = lexicon.words().id(word).and_then(|w| lexicon.pronunciations(w).next()).ok_or_else(|| {
                Failure::data(transcripts, Some(line), format!("word `{word}` is not in the lexicon"))
            })?;
            tokens.extend_from_slice(pron);
        }
        let p = simulate_posteriors(&tokens, alphabet.clone(), &cfg(a.seed.wrapping_add(i as u64)))
            .map_err(|e| Failure::usage(e.to_string()))?;
        let path: PathBuf = out_dir.join(format!("{id}.{extension}"));
        write_atomic(&path, &encode(&p))?;
    }
    Ok(())
}
