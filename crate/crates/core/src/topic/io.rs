//! Topic model file.
//!
//! ```text
//! magic b"ULDA"  version u32 = 1
//! K u64  V u64  D u64  passes u64  seed u64  alpha f64  eta f64
//! V × { len u32, utf8 }     vocabulary
//! D × { len u32, utf8 }     document ids
//! K × V f64                 phi
//! D × K f64                 theta
//! ```

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use byteorder::{LittleEndian as LE, ReadBytesExt, WriteBytesExt};

use super::lda::{LdaConfig, TopicModel};
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"ULDA";
pub const VERSION: u32 = 1;

fn write_str<W: Write>(w: &mut W, s: &str) -> std::io::Result<()> {
    w.write_u32::<LE>(s.len() as u32)?;
    w.write_all(s.as_bytes())
}

fn read_str<R: Read>(r: &mut R) -> Result<String> {
    let len = r.read_u32::<LE>().map_err(truncated)? as usize;
    let mut buf = vec![0u8; len];
    r.read_exact(&mut buf).map_err(truncated)?;
    String::from_utf8(buf).map_err(|e| Error::BadModel(e.to_string()))
}

fn truncated(e: std::io::Error) -> Error {
    Error::BadModel(format!("truncated topic model: {e}"))
}

pub fn write_topic_model<W: Write>(model: &TopicModel, mut w: W) -> std::io::Result<()> {
    let c = &model.config;
    w.write_all(MAGIC)?;
    w.write_u32::<LE>(VERSION)?;
    for n in [c.k, model.vocab.len(), model.doc_ids.len(), c.passes] {
        w.write_u64::<LE>(n as u64)?;
    }
    w.write_u64::<LE>(c.seed)?;
    w.write_f64::<LE>(c.alpha)?;
    w.write_f64::<LE>(c.eta)?;
    for s in model.vocab.iter().chain(&model.doc_ids) {
        write_str(&mut w, s)?;
    }
    for &x in model.phi.iter().chain(&model.theta) {
        w.write_f64::<LE>(x)?;
    }
    w.flush()
}

pub fn read_topic_model<R: Read>(mut r: R) -> Result<TopicModel> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic).map_err(truncated)?;
    if &magic != MAGIC {
        return Err(Error::BadModel("not a topic model (bad magic)".into()));
    }
    let version = r.read_u32::<LE>().map_err(truncated)?;
    if version != VERSION {
        return Err(Error::BadModel(format!("unsupported topic model version {version}")));
    }
    let mut dims = [0usize; 4];
    for d in &mut dims {
        *d = r.read_u64::<LE>().map_err(truncated)? as usize;
    }
    let [k, v, n_docs, passes] = dims;
    let seed = r.read_u64::<LE>().map_err(truncated)?;
    let alpha = r.read_f64::<LE>().map_err(truncated)?;
    let eta = r.read_f64::<LE>().map_err(truncated)?;
    let config = LdaConfig { k, alpha, eta, passes, seed };
    config.validate().map_err(|e| Error::BadModel(e.to_string()))?;
    let vocab = (0..v).map(|_| read_str(&mut r)).collect::<Result<Vec<_>>>()?;
    let doc_ids = (0..n_docs).map(|_| read_str(&mut r)).collect::<Result<Vec<_>>>()?;
    let mut phi = vec![0.0; k * v];
    r.read_f64_into::<LE>(&mut phi).map_err(truncated)?;
    let mut theta = vec![0.0; n_docs * k];
    r.read_f64_into::<LE>(&mut theta).map_err(truncated)?;
    Ok(TopicModel {
        config,
        vocab,
        doc_ids,
        phi,
        theta,
        assignments: Vec::new(),
    })
}

pub fn save_topic_model(model: &TopicModel, path: &Path) -> Result<()> {
    let f = File::create(path).map_err(|e| Error::io(path, e))?;
    write_topic_model(model, BufWriter::new(f)).map_err(|e| Error::io(path, e))
}

pub fn load_topic_model(path: &Path) -> Result<TopicModel> {
    let f = File::open(path).map_err(|e| Error::io(path, e))?;
    read_topic_model(BufReader::new(f))
}

/// One line per topic: `topic<TAB>word:prob word:prob ...` with the top `n` words.
pub fn write_top_words<W: Write>(model: &TopicModel, n: usize, mut w: W) -> std::io::Result<()> {
    for t in 0..model.k() {
        let words: Vec<String> = model
            .top_words(t, n)
            .into_iter()
            .map(|(word, p)| format!("{word}:{p:.6}"))
            .collect();
        writeln!(w, "{t}\t{}", words.join(" "))?;
    }
    w.flush()
}
