//! Toolkit for the ten-hundred-word controlled language: word list,
//! production rules, text normalization, corpus statistics and
//! distribution fitting.

pub mod analyzer;
pub mod distfit;
pub mod error;
pub mod lexicon;
pub mod morphology;
pub mod textpipe;

use std::path::{Path, PathBuf};

pub use error::{AnalyzeError, FitError, InputError, LexiconError, MorphologyError};
pub use lexicon::{Lexeme, Pos, WordList};
pub use morphology::{CheckResult, Derivation, Morphology, Rule, Verdict};
pub use textpipe::{ContractionTable, Token};

/// The bundled reference data.
pub mod data {
    pub const WORD_LIST: &str = include_str!("../data/wordlist.tsv");
    pub const IRREGULAR: &str = include_str!("../data/irregular.tsv");
    pub const CONTRACTIONS: &str = include_str!("../data/contractions.tsv");

    /// Environment variable naming a directory that overrides the bundled
    /// files (`wordlist.tsv`, `irregular.tsv`, `contractions.tsv`).
    pub const DATA_DIR_ENV: &str = "TENHUNDRED_DATA_DIR";
}

/// Word list, closure and contraction table, loaded once and shared.
#[derive(Debug, Clone)]
pub struct Engine {
    morphology: Morphology,
    contractions: ContractionTable,
}

/// Where to load each data file from; `None` means the default.
#[derive(Debug, Clone, Default)]
pub struct DataPaths {
    pub word_list: Option<PathBuf>,
    pub irregular: Option<PathBuf>,
    pub contractions: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error(transparent)]
    Input(#[from] InputError),
}

fn read(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|source| InputError::Io {
        path: path.to_path_buf(),
        source,
    })
}

impl Engine {
    pub fn new(words: WordList, contractions: ContractionTable) -> Self {
        Engine {
            morphology: Morphology::new(words),
            contractions,
        }
    }

    /// The bundled reference list and tables.
    pub fn reference() -> Self {
        let mut words = WordList::parse(data::WORD_LIST).expect("bundled word list");
        words.attach_irregular(data::IRREGULAR).expect("bundled irregular table");
        let contractions = ContractionTable::parse(data::CONTRACTIONS).expect("bundled contractions");
        Engine::new(words, contractions)
    }

    /// Loads each file from its explicit path, else from `data_dir`, else the
    /// bundled copy.
    pub fn load(paths: &DataPaths, data_dir: Option<&Path>) -> Result<Self, LoadError> {
        let pick = |explicit: &Option<PathBuf>, name: &str, bundled: &str| -> Result<String, InputError> {
            match (explicit, data_dir) {
                (Some(p), _) => read(p),
                (None, Some(dir)) if dir.join(name).exists() => read(&dir.join(name)),
                _ => Ok(bundled.to_string()),
            }
        };
        let word_text = pick(&paths.word_list, "wordlist.tsv", data::WORD_LIST)?;
        let irregular_text = pick(&paths.irregular, "irregular.tsv", data::IRREGULAR)?;
        let contraction_text = pick(&paths.contractions, "contractions.tsv", data::CONTRACTIONS)?;
        let mut words = WordList::parse(&word_text)?;
        words.attach_irregular(&irregular_text)?;
        Ok(Engine::new(words, ContractionTable::parse(&contraction_text)?))
    }

    pub fn morphology(&self) -> &Morphology {
        &self.morphology
    }

    pub fn words(&self) -> &WordList {
        self.morphology.words()
    }

    pub fn contractions(&self) -> &ContractionTable {
        &self.contractions
    }

    pub fn tokenize(&self, text: &str) -> Vec<Token> {
        textpipe::normalize_and_tokenize(text, &self.contractions, self.morphology.closure())
    }

    pub fn check_token(&self, surface: &str) -> CheckResult {
        self.morphology.check_token(surface)
    }
}
