//! The JSON file formats used by the CLI: models, measured models,
//! bounds queries, proofs, and result renderings.
//!
//! Model file:
//! `{"states": N, "vf": {"A": [0], ...}, "rbox": "universal" | [[i,j],...],
//!   "vp": {"p": [[i,j],...], ...}}`.
//!
//! Measured-model file: the frame part without `"vp"`, plus
//! `"cells": [{"weight": "2/5", "valuations": [{"p": [[0,1]], ...}, ...]}, ...]`.
//!
//! Query file: `{"frame": {...}, "state": 0, "constraints": ["P(...) >= 3/5", ...],
//!   "query": "..."}`.
//!
//! Proof file: `{"system": "PEDAL", "lines": [{"stmt": "P(a) >= 0",
//!   "just": {"axiom": "A2"}}, {"stmt": "...", "just": {"mp": [1, 2]}}, ...]}`.
//!
//! Loaders validate everything they read and refuse invalid files.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{Bounds, BoundsQuery, BoundsResult};
use crate::credence::{validate_pedal, Cell, PedalModel};
use crate::kripke::{validate_model, Frame, KripkeModel, Relation, StateSet};
use crate::proofcheck::{Certificate, Justification, ProofLine, ProofScript, Statement, System};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::syntax::{
    parse_credence, parse_formula, parse_formula_raw, parse_program_raw, ParseError, Signature,
};

#[derive(Debug, Error)]
pub enum FileError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("state index {index} out of range (model has {states} states)")]
    StateOutOfRange { index: usize, states: usize },
    #[error("bad rational `{text}`: {message}")]
    BadRational { text: String, message: String },
    #[error("rbox must be \"universal\" or a pair list, got \"{0}\"")]
    BadRbox(String),
    #[error("unknown proof system `{0}` (expected \"PDLBox\" or \"PEDAL\")")]
    UnknownSystem(String),
    #[error("r2 certificate must be \"semantic\" or an embedded proof, got \"{0}\"")]
    BadCertificate(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
}

impl From<serde_json::Error> for FileError {
    fn from(e: serde_json::Error) -> Self {
        FileError::Json(e.to_string())
    }
}

// ---------------------------------------------------------------------
// frames and models

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum RboxFile {
    Keyword(String),
    Pairs(Vec<(usize, usize)>),
}

#[derive(Debug, Serialize, Deserialize)]
struct ModelFile {
    states: usize,
    #[serde(default)]
    vf: BTreeMap<String, Vec<usize>>,
    rbox: RboxFile,
    #[serde(default)]
    vp: BTreeMap<String, Vec<(usize, usize)>>,
}

fn rbox_from_file(rbox: &RboxFile, states: usize) -> Result<Relation, FileError> {
    match rbox {
        RboxFile::Keyword(word) if word == "universal" => Ok(Relation::universal(states)),
        RboxFile::Keyword(word) => Err(FileError::BadRbox(word.clone())),
        RboxFile::Pairs(pairs) => {
            check_pairs(pairs, states)?;
            Ok(Relation::from_pairs(states, pairs.iter().copied()))
        }
    }
}

fn check_pairs(pairs: &[(usize, usize)], states: usize) -> Result<(), FileError> {
    for &(i, j) in pairs {
        for index in [i, j] {
            if index >= states {
                return Err(FileError::StateOutOfRange { index, states });
            }
        }
    }
    Ok(())
}

fn frame_from_parts(
    states: usize,
    vf: &BTreeMap<String, Vec<usize>>,
    rbox: &RboxFile,
) -> Result<Frame, FileError> {
    let rbox = rbox_from_file(rbox, states)?;
    let mut sets = BTreeMap::new();
    for (name, members) in vf {
        for &index in members {
            if index >= states {
                return Err(FileError::StateOutOfRange { index, states });
            }
        }
        sets.insert(
            name.clone(),
            StateSet::from_states(states, members.iter().copied()),
        );
    }
    Ok(Frame::new(states, sets, rbox))
}

/// Parse and validate a model file.
pub fn load_model(text: &str) -> Result<KripkeModel, FileError> {
    let file: ModelFile = serde_json::from_str(text)?;
    let frame = frame_from_parts(file.states, &file.vf, &file.rbox)?;
    let mut vp = BTreeMap::new();
    for (name, pairs) in &file.vp {
        check_pairs(pairs, file.states)?;
        vp.insert(
            name.clone(),
            Relation::from_pairs(file.states, pairs.iter().copied()),
        );
    }
    let model = KripkeModel::new(frame, vp);
    let violations = validate_model(&model);
    if !violations.is_empty() {
        let text: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
        return Err(FileError::InvalidModel(text.join("; ")));
    }
    Ok(model)
}

fn relation_pairs(rel: &Relation) -> Vec<(usize, usize)> {
    rel.pairs().collect()
}

/// Render a model in the model-file format.
pub fn model_to_json(model: &KripkeModel) -> String {
    let file = ModelFile {
        states: model.frame.n_states,
        vf: model
            .frame
            .vf
            .iter()
            .map(|(k, v)| (k.clone(), v.iter().collect()))
            .collect(),
        rbox: RboxFile::Pairs(relation_pairs(&model.frame.rbox)),
        vp: model
            .vp
            .iter()
            .map(|(k, v)| (k.clone(), relation_pairs(v)))
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("serializable")
}

// ---------------------------------------------------------------------
// measured models

#[derive(Debug, Serialize, Deserialize)]
struct CellFile {
    weight: String,
    valuations: Vec<BTreeMap<String, Vec<(usize, usize)>>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct PedalFile {
    states: usize,
    #[serde(default)]
    vf: BTreeMap<String, Vec<usize>>,
    rbox: RboxFile,
    cells: Vec<CellFile>,
    #[serde(default, rename = "restWeight")]
    rest_weight: Option<String>,
}

fn rational_from_text(text: &str) -> Result<Rational, FileError> {
    parse_rational(text).map_err(|message| FileError::BadRational {
        text: text.to_string(),
        message,
    })
}

/// Parse and validate a measured-model file.
pub fn load_pedal(text: &str) -> Result<PedalModel, FileError> {
    let file: PedalFile = serde_json::from_str(text)?;
    let frame = frame_from_parts(file.states, &file.vf, &file.rbox)?;
    let mut cells = Vec::new();
    for cell in &file.cells {
        let weight = rational_from_text(&cell.weight)?;
        let mut valuations = Vec::new();
        for val in &cell.valuations {
            let mut v = BTreeMap::new();
            for (name, pairs) in val {
                check_pairs(pairs, file.states)?;
                v.insert(
                    name.clone(),
                    Relation::from_pairs(file.states, pairs.iter().copied()),
                );
            }
            valuations.push(v);
        }
        cells.push(Cell { weight, valuations });
    }
    let mut model = PedalModel::new(frame, cells);
    if let Some(rest) = &file.rest_weight {
        model.implicit_rest_weight = rational_from_text(rest)?;
    }
    let violations = validate_pedal(&model);
    if !violations.is_empty() {
        let text: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
        return Err(FileError::InvalidModel(text.join("; ")));
    }
    Ok(model)
}

/// Render a measured model in the file format.
pub fn pedal_to_json(model: &PedalModel) -> String {
    let file = PedalFile {
        states: model.frame.n_states,
        vf: model
            .frame
            .vf
            .iter()
            .map(|(k, v)| (k.clone(), v.iter().collect()))
            .collect(),
        rbox: RboxFile::Pairs(relation_pairs(&model.frame.rbox)),
        cells: model
            .cells
            .iter()
            .map(|cell| CellFile {
                weight: format_rational(&cell.weight),
                valuations: cell
                    .valuations
                    .iter()
                    .map(|v| {
                        v.iter()
                            .map(|(k, rel)| (k.clone(), relation_pairs(rel)))
                            .collect()
                    })
                    .collect(),
            })
            .collect(),
        rest_weight: None,
    };
    serde_json::to_string_pretty(&file).expect("serializable")
}

// ---------------------------------------------------------------------
// bounds queries

#[derive(Debug, Serialize, Deserialize)]
struct FrameFile {
    states: usize,
    #[serde(default)]
    vf: BTreeMap<String, Vec<usize>>,
    rbox: RboxFile,
}

#[derive(Debug, Serialize, Deserialize)]
struct QueryFile {
    frame: FrameFile,
    state: usize,
    constraints: Vec<String>,
    query: String,
}

/// Parse a bounds-query file. Formula atoms must be declared by the
/// frame's valuation; program atoms are collected from the formulas.
pub fn load_query(text: &str) -> Result<BoundsQuery, FileError> {
    let file: QueryFile = serde_json::from_str(text)?;
    let frame = frame_from_parts(file.frame.states, &file.frame.vf, &file.frame.rbox)?;
    if file.state >= frame.n_states {
        return Err(FileError::StateOutOfRange {
            index: file.state,
            states: frame.n_states,
        });
    }

    // the signature: frame formula atoms, program atoms read off the text
    let mut sig = Signature::new(
        frame.vf.keys().cloned().collect::<Vec<_>>(),
        Vec::<String>::new(),
    );
    for constraint in &file.constraints {
        let raw = crate::syntax::parse_credence_raw(constraint)?;
        sig.absorb_credence(&raw);
    }
    let raw_query = parse_formula_raw(&file.query)?;
    sig.absorb_formula(&raw_query);
    sig.formula_atoms = frame.vf.keys().cloned().collect();

    let constraints = file
        .constraints
        .iter()
        .map(|c| parse_credence(c, &sig))
        .collect::<Result<Vec<_>, _>>()?;
    let query = parse_formula(&file.query, &sig)?;
    Ok(BoundsQuery {
        frame,
        state: file.state,
        constraints,
        query,
    })
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundsOutputFile {
    pub feasible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_attained: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_attained: Option<bool>,
}

/// Render a bounds result in the output format.
pub fn bounds_to_json(result: &BoundsResult) -> String {
    let file = match result {
        BoundsResult::Infeasible => BoundsOutputFile {
            feasible: false,
            min: None,
            min_attained: None,
            max: None,
            max_attained: None,
        },
        BoundsResult::Bounded(Bounds {
            minimum,
            maximum,
            min_attained,
            max_attained,
            ..
        }) => BoundsOutputFile {
            feasible: true,
            min: Some(format_rational(minimum)),
            min_attained: Some(*min_attained),
            max: Some(format_rational(maximum)),
            max_attained: Some(*max_attained),
        },
    };
    serde_json::to_string_pretty(&file).expect("serializable")
}

// ---------------------------------------------------------------------
// proofs

#[derive(Debug, Serialize, Deserialize)]
struct ProofFile {
    system: String,
    lines: Vec<LineFile>,
}

#[derive(Debug, Serialize, Deserialize)]
struct LineFile {
    stmt: String,
    just: JustFile,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
enum JustFile {
    Axiom(String),
    Premise(bool),
    Mp([usize; 2]),
    NecProgram(usize, String),
    NecGlobal(usize),
    R2(R2File),
    R3(R3File),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum R2File {
    Tag(String),
    Script(Box<ProofFile>),
}

#[derive(Debug, Serialize, Deserialize)]
struct R3File {
    premises: Vec<usize>,
    r: String,
    formula: String,
}

fn system_from_text(text: &str) -> Result<System, FileError> {
    match text {
        "PDLBox" => Ok(System::PdlBox),
        "PEDAL" => Ok(System::Pedal),
        other => Err(FileError::UnknownSystem(other.to_string())),
    }
}

fn script_from_file(file: &ProofFile) -> Result<ProofScript, FileError> {
    let system = system_from_text(&file.system)?;
    let mut lines = Vec::new();
    for line in &file.lines {
        let statement = match system {
            System::PdlBox => Statement::Ground(parse_formula_raw(&line.stmt)?),
            System::Pedal => Statement::Credence(crate::syntax::parse_credence_raw(&line.stmt)?),
        };
        let justification = match &line.just {
            JustFile::Axiom(name) => Justification::Axiom(name.clone()),
            JustFile::Premise(_) => Justification::Premise,
            JustFile::Mp([i, j]) => Justification::Mp(*i, *j),
            JustFile::NecProgram(i, pi) => {
                Justification::NecProgram(*i, parse_program_raw(pi)?)
            }
            JustFile::NecGlobal(i) => Justification::NecGlobal(*i),
            JustFile::R2(R2File::Tag(tag)) if tag == "semantic" => {
                Justification::R2(Certificate::Semantic)
            }
            JustFile::R2(R2File::Tag(tag)) => {
                return Err(FileError::BadCertificate(tag.clone()))
            }
            JustFile::R2(R2File::Script(inner)) => {
                Justification::R2(Certificate::Script(script_from_file(inner)?))
            }
            JustFile::R3(r3) => Justification::R3 {
                premises: r3.premises.clone(),
                r: rational_from_text(&r3.r)?,
                ground: parse_formula_raw(&r3.formula)?,
            },
        };
        lines.push(ProofLine {
            statement,
            justification,
        });
    }
    Ok(ProofScript { system, lines })
}

/// Parse a proof file.
pub fn load_proof(text: &str) -> Result<ProofScript, FileError> {
    let file: ProofFile = serde_json::from_str(text)?;
    script_from_file(&file)
}

fn script_to_file(script: &ProofScript) -> ProofFile {
    ProofFile {
        system: match script.system {
            System::PdlBox => "PDLBox".to_string(),
            System::Pedal => "PEDAL".to_string(),
        },
        lines: script
            .lines
            .iter()
            .map(|line| LineFile {
                stmt: line.statement.to_string(),
                just: match &line.justification {
                    Justification::Axiom(name) => JustFile::Axiom(name.clone()),
                    Justification::Premise => JustFile::Premise(true),
                    Justification::Mp(i, j) => JustFile::Mp([*i, *j]),
                    Justification::NecProgram(i, pi) => {
                        JustFile::NecProgram(*i, pi.to_string())
                    }
                    Justification::NecGlobal(i) => JustFile::NecGlobal(*i),
                    Justification::R2(Certificate::Semantic) => {
                        JustFile::R2(R2File::Tag("semantic".to_string()))
                    }
                    Justification::R2(Certificate::Script(inner)) => {
                        JustFile::R2(R2File::Script(Box::new(script_to_file(inner))))
                    }
                    Justification::R3 { premises, r, ground } => JustFile::R3(R3File {
                        premises: premises.clone(),
                        r: format_rational(r),
                        formula: ground.to_string(),
                    }),
                },
            })
            .collect(),
    }
}

/// Render a proof script in the proof-file format.
pub fn proof_to_json(script: &ProofScript) -> String {
    serde_json::to_string_pretty(&script_to_file(script)).expect("serializable")
}
