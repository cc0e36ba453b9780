#![allow(dead_code)]

use std::sync::OnceLock;

use serrekb::corpus::{bundled, CorpusAlgebra};

pub fn corpus() -> &'static [CorpusAlgebra] {
    static CORPUS: OnceLock<Vec<CorpusAlgebra>> = OnceLock::new();
    CORPUS.get_or_init(|| bundled().expect("bundled corpus"))
}

pub fn algebra(name: &str) -> &'static CorpusAlgebra {
    corpus().iter().find(|c| c.name == name).expect("corpus algebra")
}
