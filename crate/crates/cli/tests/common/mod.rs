#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use emomap_core::lexicon::{write_lexicon, write_merged};
use emomap_core::synth::{synthetic_gold, SyntheticSpec};
use emomap_core::{Lexicon, MergedLexicon};

pub fn emomap() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_emomap"));
    cmd.env_remove("EMOMAP_DATA_DIR").env_remove("SOURCE_DATE_EPOCH");
    cmd
}

pub fn run(dir: &Path, args: &[&str]) -> Output {
    emomap().current_dir(dir).args(args).output().expect("binary runs")
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[track_caller]
pub fn ok(o: Output) -> Output {
    assert!(o.status.success(), "exit {:?}\n{}", o.status.code(), stderr(&o));
    o
}

pub fn gold(seed: u64, words: usize) -> MergedLexicon {
    synthetic_gold(&SyntheticSpec { words, seed, ..Default::default() })
}

pub fn write_gold(dir: &Path, name: &str, g: &MergedLexicon) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, write_merged(g, 6)).unwrap();
    p
}

pub fn write_lex(dir: &Path, name: &str, lex: &Lexicon) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, write_lexicon(lex, 6)).unwrap();
    p
}
