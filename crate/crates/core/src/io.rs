//! Plain-text tensor files.
//!
//! ```text
//! dense d n_1 .. n_d            followed by ∏n_i values, last index fastest
//! sparse d n_1 .. n_d N         followed by N lines `i_1 .. i_d value` (1-based)
//! tt d n_1 .. n_d r_1 .. r_{d-1} followed by each core, one per line
//! ```
//!
//! Values are written with Rust's shortest round-trip formatting, so writing
//! and reading back is lossless.

use std::io::{Read, Write};

use crate::error::{Result, TtError};
use crate::tensor::{DenseTensor, Shape, SparseTensor};
use crate::tt::TtTensor;

/// Any tensor that can appear in a file.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyTensor {
    Dense(DenseTensor),
    Sparse(SparseTensor),
    Tt(TtTensor),
}

struct Tokens<'a> {
    inner: std::str::SplitWhitespace<'a>,
}

impl<'a> Tokens<'a> {
    fn next(&mut self, what: &str) -> Result<&'a str> {
        self.inner
            .next()
            .ok_or_else(|| TtError::Parse(format!("unexpected end of input, expected {what}")))
    }

    fn usize(&mut self, what: &str) -> Result<usize> {
        let tok = self.next(what)?;
        tok.parse()
            .map_err(|_| TtError::Parse(format!("expected {what}, found `{tok}`")))
    }

    fn f64(&mut self) -> Result<f64> {
        let tok = self.next("value")?;
        let v: f64 = tok
            .parse()
            .map_err(|_| TtError::Parse(format!("expected a number, found `{tok}`")))?;
        if !v.is_finite() {
            return Err(TtError::NonFinite("tensor file value"));
        }
        Ok(v)
    }

    fn finish(&mut self) -> Result<()> {
        match self.inner.next() {
            None => Ok(()),
            Some(tok) => Err(TtError::Parse(format!("trailing token `{tok}`"))),
        }
    }
}

fn read_shape(tokens: &mut Tokens) -> Result<Shape> {
    let d = tokens.usize("order")?;
    if d == 0 {
        return Err(TtError::Parse("order must be positive".into()));
    }
    let dims = (0..d)
        .map(|_| tokens.usize("dimension"))
        .collect::<Result<Vec<_>>>()?;
    Shape::new(dims)
}

/// Parses any of the three formats from a string.
pub fn parse_tensor(text: &str) -> Result<AnyTensor> {
    let mut tokens = Tokens {
        inner: text.split_whitespace(),
    };
    let kind = tokens.next("format tag")?;
    let out = match kind {
        "dense" => {
            let shape = read_shape(&mut tokens)?;
            let len = shape.dense_len()?;
            let data = (0..len).map(|_| tokens.f64()).collect::<Result<Vec<_>>>()?;
            AnyTensor::Dense(DenseTensor::new(shape, data)?)
        }
        "sparse" => {
            let shape = read_shape(&mut tokens)?;
            let count = tokens.usize("entry count")?;
            let mut entries = Vec::with_capacity(count);
            for _ in 0..count {
                let index = (0..shape.order())
                    .map(|_| match tokens.usize("index")? {
                        0 => Err(TtError::Parse("indices are 1-based".into())),
                        i => Ok(i - 1),
                    })
                    .collect::<Result<Vec<_>>>()?;
                entries.push((index, tokens.f64()?));
            }
            AnyTensor::Sparse(SparseTensor::new(shape, entries)?)
        }
        "tt" => {
            let shape = read_shape(&mut tokens)?;
            let d = shape.order();
            if d < 2 {
                return Err(TtError::Parse("trains need order >= 2".into()));
            }
            let ranks = (0..d - 1)
                .map(|_| tokens.usize("rank"))
                .collect::<Result<Vec<_>>>()?;
            let mut cores = Vec::with_capacity(d);
            for i in 0..d {
                let n = shape.dim(i);
                let dims = match (i, i + 1 == d) {
                    (0, _) => vec![n, ranks[0]],
                    (_, true) => vec![ranks[i - 1], n],
                    _ => vec![ranks[i - 1], n, ranks[i]],
                };
                let core_shape = Shape::new(dims)?;
                let len = core_shape.dense_len()?;
                let data = (0..len).map(|_| tokens.f64()).collect::<Result<Vec<_>>>()?;
                cores.push(DenseTensor::new(core_shape, data)?);
            }
            AnyTensor::Tt(TtTensor::new(cores)?)
        }
        other => return Err(TtError::Parse(format!("unknown format tag `{other}`"))),
    };
    tokens.finish()?;
    Ok(out)
}

pub fn read_tensor<R: Read>(mut reader: R) -> Result<AnyTensor> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    parse_tensor(&text)
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items
        .into_iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn header(kind: &str, shape: &Shape) -> String {
    format!("{kind} {} {}", shape.order(), join(shape.dims()))
}

pub fn write_dense<W: Write>(mut w: W, x: &DenseTensor) -> Result<()> {
    writeln!(w, "{}", header("dense", x.shape()))?;
    let last = x.shape().dim(x.order() - 1);
    for chunk in x.data().chunks(last) {
        writeln!(w, "{}", join(chunk))?;
    }
    Ok(())
}

pub fn write_sparse<W: Write>(mut w: W, x: &SparseTensor) -> Result<()> {
    writeln!(w, "{} {}", header("sparse", x.shape()), x.nnz())?;
    for (index, value) in x.iter() {
        writeln!(w, "{} {value}", join(index.iter().map(|i| i + 1)))?;
    }
    Ok(())
}

pub fn write_tt<W: Write>(mut w: W, t: &TtTensor) -> Result<()> {
    writeln!(w, "{} {}", header("tt", t.shape()), join(t.ranks().as_slice()))?;
    for core in t.cores() {
        writeln!(w, "{}", join(core.data()))?;
    }
    Ok(())
}

pub fn write_tensor<W: Write>(w: W, x: &AnyTensor) -> Result<()> {
    match x {
        AnyTensor::Dense(x) => write_dense(w, x),
        AnyTensor::Sparse(x) => write_sparse(w, x),
        AnyTensor::Tt(t) => write_tt(w, t),
    }
}
