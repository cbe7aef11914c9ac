//! Embedding model file.
//!
//! Layout (little endian):
//!
//! ```text
//! magic  b"UEMB"      version u32 = 1
//! vocab  u64          dim u64
//! window u64  negative u64  epochs u64  min_count u64  seed u64  learning_rate f64
//! vocab_size × { len u32, utf8 bytes, count u64 }
//! vocab_size × dim f64   input vectors, row-major
//! vocab_size × dim f64   output vectors, row-major
//! ```

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use byteorder::{LittleEndian as LE, ReadBytesExt, WriteBytesExt};

use super::skipgram::{EmbeddingModel, SkipGramParams};
use super::vocab::Vocabulary;
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"UEMB";
pub const VERSION: u32 = 1;

pub fn write_model<W: Write>(model: &EmbeddingModel, mut w: W) -> std::io::Result<()> {
    w.write_all(MAGIC)?;
    w.write_u32::<LE>(VERSION)?;
    w.write_u64::<LE>(model.vocab.len() as u64)?;
    w.write_u64::<LE>(model.dim as u64)?;
    let p = &model.params;
    w.write_u64::<LE>(p.window as u64)?;
    w.write_u64::<LE>(p.negative as u64)?;
    w.write_u64::<LE>(p.epochs as u64)?;
    w.write_u64::<LE>(p.min_count)?;
    w.write_u64::<LE>(model.seed)?;
    w.write_f64::<LE>(p.learning_rate)?;
    for (word, &count) in model.vocab.words().iter().zip(model.vocab.counts()) {
        w.write_u32::<LE>(word.len() as u32)?;
        w.write_all(word.as_bytes())?;
        w.write_u64::<LE>(count)?;
    }
    for &x in model.input.iter().chain(&model.output) {
        w.write_f64::<LE>(x)?;
    }
    w.flush()
}

pub fn read_model<R: Read>(mut r: R) -> Result<EmbeddingModel> {
    let bad = |m: String| Error::BadModel(m);
    let io = |e: std::io::Error| Error::BadModel(format!("truncated embedding file: {e}"));
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic).map_err(io)?;
    if &magic != MAGIC {
        return Err(bad("not an embedding model (bad magic)".into()));
    }
    let version = r.read_u32::<LE>().map_err(io)?;
    if version != VERSION {
        return Err(bad(format!("unsupported embedding model version {version}")));
    }
    let n = r.read_u64::<LE>().map_err(io)? as usize;
    let dim = r.read_u64::<LE>().map_err(io)? as usize;
    if dim < 2 || n == 0 {
        return Err(bad(format!("invalid shape {n}x{dim}")));
    }
    let window = r.read_u64::<LE>().map_err(io)? as usize;
    let negative = r.read_u64::<LE>().map_err(io)? as usize;
    let epochs = r.read_u64::<LE>().map_err(io)? as usize;
    let min_count = r.read_u64::<LE>().map_err(io)?;
    let seed = r.read_u64::<LE>().map_err(io)?;
    let learning_rate = r.read_f64::<LE>().map_err(io)?;
    let mut words = Vec::with_capacity(n.min(1 << 20));
    let mut counts = Vec::with_capacity(n.min(1 << 20));
    for _ in 0..n {
        let len = r.read_u32::<LE>().map_err(io)? as usize;
        let mut buf = vec![0u8; len];
        r.read_exact(&mut buf).map_err(io)?;
        words.push(String::from_utf8(buf).map_err(|e| bad(e.to_string()))?);
        counts.push(r.read_u64::<LE>().map_err(io)?);
    }
    let mut read_matrix = || -> Result<Vec<f64>> {
        let mut m = vec![0.0; n * dim];
        r.read_f64_into::<LE>(&mut m).map_err(io)?;
        Ok(m)
    };
    let input = read_matrix()?;
    let output = read_matrix()?;
    if input.iter().chain(&output).any(|x| !x.is_finite()) {
        return Err(bad("non-finite vector entry".into()));
    }
    Ok(EmbeddingModel {
        vocab: Vocabulary::from_parts(words, counts, min_count),
        dim,
        input,
        output,
        params: SkipGramParams {
            dim,
            window,
            negative,
            epochs,
            learning_rate,
            min_count,
            ..Default::default()
        },
        seed,
    })
}

pub fn save_model(model: &EmbeddingModel, path: &Path) -> Result<()> {
    let f = File::create(path).map_err(|e| Error::io(path, e))?;
    write_model(model, BufWriter::new(f)).map_err(|e| Error::io(path, e))
}

pub fn load_model(path: &Path) -> Result<EmbeddingModel> {
    let f = File::open(path).map_err(|e| Error::io(path, e))?;
    read_model(BufReader::new(f))
}

/// Plain-text export: one line per word, the word followed by its input vector.
pub fn write_text<W: Write>(model: &EmbeddingModel, mut w: W) -> std::io::Result<()> {
    for (i, word) in model.vocab.words().iter().enumerate() {
        write!(w, "{word}")?;
        for x in model.input_row(i) {
            write!(w, " {x}")?;
        }
        writeln!(w)?;
    }
    w.flush()
}
