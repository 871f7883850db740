//! Python bindings for `qrx-core`.

use pyo3::exceptions::{PyIOError, PyIndexError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyBytes;
use qrx_core::conv::{cyclic_conv_gf2_with, linear_conv_gf2_with};
use qrx_core::{
    params, sanity, Backend, BitVector, Error, ExtractorParams, Family, Mode, SeedBundle, StreamSession,
};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io(_) => PyIOError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn family(s: &str) -> PyResult<Family> {
    s.parse().map_err(to_py)
}

fn mode(s: &str) -> PyResult<Mode> {
    s.parse().map_err(to_py)
}

fn backend(s: &str) -> PyResult<Backend> {
    match s {
        "carryless" => Ok(Backend::Carryless),
        "portable" => Ok(Backend::CarrylessPortable),
        "ntt" => Ok(Backend::Ntt),
        _ => Err(PyValueError::new_err(format!("unknown backend {s:?}"))),
    }
}

/// Packed GF(2) bit vector.
#[pyclass(name = "BitVector", module = "qrx", eq, from_py_object)]
#[derive(Clone, PartialEq)]
struct PyBitVector {
    inner: BitVector,
}

impl From<BitVector> for PyBitVector {
    fn from(inner: BitVector) -> Self {
        Self { inner }
    }
}

#[pymethods]
impl PyBitVector {
    /// Build from an iterable of 0/1 values.
    #[new]
    #[pyo3(signature = (bits = Vec::new()))]
    fn new(bits: Vec<u8>) -> PyResult<Self> {
        if bits.iter().any(|&b| b > 1) {
            return Err(PyValueError::new_err("bits must be 0 or 1"));
        }
        Ok(BitVector::from_bits(&bits).into())
    }

    #[staticmethod]
    fn zeros(len: usize) -> Self {
        BitVector::zeros(len).into()
    }

    /// Decode MSB-first bytes, keeping the first `length` bits (default: all).
    #[staticmethod]
    #[pyo3(signature = (data, length = None))]
    fn from_bytes(data: &[u8], length: Option<usize>) -> PyResult<Self> {
        let len = length.unwrap_or(data.len() * 8);
        BitVector::from_bytes_msb(data, len).map(Into::into).map_err(to_py)
    }

    #[staticmethod]
    fn read(path: &str, offset: u64, count: u64) -> PyResult<Self> {
        qrx_core::read_bits(path, offset, count).map(Into::into).map_err(to_py)
    }

    fn write(&self, path: &str) -> PyResult<()> {
        qrx_core::write_bits(path, &self.inner).map_err(to_py)
    }

    fn to_bytes<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        PyBytes::new(py, &self.inner.to_bytes_msb())
    }

    fn to_list(&self) -> Vec<u32> {
        self.inner.iter().map(u32::from).collect()
    }

    fn count_ones(&self) -> usize {
        self.inner.count_ones()
    }

    /// Half-open `[start, end)`, as in Python slicing.
    fn slice(&self, start: usize, end: usize) -> PyResult<Self> {
        if end < start {
            return Err(PyValueError::new_err("slice end before start"));
        }
        self.inner.range(start, end - start).map(Into::into).map_err(to_py)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __getitem__(&self, i: isize) -> PyResult<u8> {
        let len = self.inner.len() as isize;
        let j = if i < 0 { i + len } else { i };
        if !(0..len).contains(&j) {
            return Err(PyIndexError::new_err("bit index out of range"));
        }
        Ok(self.inner.get(j as usize) as u8)
    }

    fn __xor__(&self, other: &Self) -> PyResult<Self> {
        self.inner.xor(&other.inner).map(Into::into).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.inner)
    }
}

/// Linear convolution over GF(2).
#[pyfunction]
#[pyo3(signature = (a, b, backend = "carryless"))]
fn linear_conv(a: &PyBitVector, b: &PyBitVector, backend: &str) -> PyResult<PyBitVector> {
    linear_conv_gf2_with(&a.inner, &b.inner, self::backend(backend)?)
        .map(Into::into)
        .map_err(to_py)
}

/// Cyclic convolution over GF(2) of equal-length vectors.
#[pyfunction]
#[pyo3(signature = (a, b, backend = "carryless"))]
fn cyclic_conv(a: &PyBitVector, b: &PyBitVector, backend: &str) -> PyResult<PyBitVector> {
    cyclic_conv_gf2_with(&a.inner, &b.inner, self::backend(backend)?)
        .map(Into::into)
        .map_err(to_py)
}

#[pyfunction]
fn output_length(n: u64, k: u64, log2_eps: i64) -> PyResult<u64> {
    params::output_length(n, k, log2_eps).map_err(to_py)
}

/// `(len_r, len_y)` for an instance of dimension `n`.
#[pyfunction]
fn seed_lengths(family: &str, mode: &str, n: usize, m: usize) -> PyResult<(usize, usize)> {
    let l = params::seed_lengths(self::family(family)?, self::mode(mode)?, n, m).map_err(to_py)?;
    Ok((l.r, l.y))
}

#[pyfunction]
fn next_circulant_prime(n: u64) -> u64 {
    params::next_circulant_prime(n)
}

#[pyfunction]
fn circulant_primes(lo: u64, hi: u64) -> Vec<u64> {
    params::circulant_primes(lo, hi)
}

#[pyfunction]
fn predicted_ops(family: &str, mode: &str, n: usize, m: usize) -> PyResult<i64> {
    params::predicted_ops(self::family(family)?, self::mode(mode)?, n, m).map_err(to_py)
}

#[pyfunction]
fn kernel_length(family: &str, mode: &str, n: usize, m: usize) -> PyResult<usize> {
    Ok(params::kernel_length(self::family(family)?, self::mode(mode)?, n, m))
}

/// Extractor parameters derived from `(n, k, log2_eps)`.
#[pyclass(name = "Params", module = "qrx", frozen, from_py_object)]
#[derive(Clone)]
struct PyParams {
    inner: ExtractorParams,
}

#[pymethods]
impl PyParams {
    /// For the circulant family `n` is the prime dimension.
    #[new]
    #[pyo3(signature = (family, mode, n, k, log2_eps = -64))]
    fn new(family: &str, mode: &str, n: usize, k: u64, log2_eps: i64) -> PyResult<Self> {
        let inner = ExtractorParams::new(self::family(family)?, self::mode(mode)?, n, k, log2_eps).map_err(to_py)?;
        Ok(Self { inner })
    }

    /// Parameters for `raw_len` raw bits; circulant picks the prime dimension.
    #[staticmethod]
    #[pyo3(signature = (family, mode, raw_len, k, log2_eps = -64))]
    fn for_raw_len(family: &str, mode: &str, raw_len: usize, k: u64, log2_eps: i64) -> PyResult<Self> {
        let inner =
            ExtractorParams::for_raw_len(self::family(family)?, self::mode(mode)?, raw_len, k, log2_eps).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn family(&self) -> &'static str {
        self.inner.family.as_str()
    }

    #[getter]
    fn mode(&self) -> &'static str {
        self.inner.mode.as_str()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    #[getter]
    fn k(&self) -> u64 {
        self.inner.k
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m
    }

    #[getter]
    fn raw_len(&self) -> usize {
        self.inner.raw_len()
    }

    #[getter]
    fn seed_lengths(&self) -> (usize, usize) {
        let l = self.inner.seed_lengths();
        (l.r, l.y)
    }

    #[getter]
    fn soundness_log2_eps(&self) -> f64 {
        self.inner.soundness().as_f64()
    }

    fn __repr__(&self) -> String {
        let p = &self.inner;
        format!("Params(family={:?}, mode={:?}, n={}, k={}, m={})", p.family.as_str(), p.mode.as_str(), p.n, p.k, p.m)
    }
}

/// Block-mode extraction with seed `y`.
#[pyfunction]
fn block_extract(params: &PyParams, x: &PyBitVector, y: &PyBitVector) -> PyResult<PyBitVector> {
    qrx_core::block_extract(&params.inner, &x.inner, &y.inner)
        .map(Into::into)
        .map_err(to_py)
}

/// Stream-mode mask for seeds `(r, y)`.
#[pyfunction]
fn prepare_mask(params: &PyParams, r: &PyBitVector, y: &PyBitVector) -> PyResult<PyBitVector> {
    let seeds = SeedBundle::new(r.inner.clone(), y.inner.clone());
    qrx_core::prepare_mask(&params.inner, &seeds)
        .map(|mask| mask.bits().clone().into())
        .map_err(to_py)
}

/// One-shot stream-mode extraction.
#[pyfunction]
fn stream_extract(params: &PyParams, x: &PyBitVector, r: &PyBitVector, y: &PyBitVector) -> PyResult<PyBitVector> {
    let seeds = SeedBundle::new(r.inner.clone(), y.inner.clone());
    qrx_core::stream_extract(&params.inner, &x.inner, &seeds)
        .map(Into::into)
        .map_err(to_py)
}

/// Incremental stream-mode extraction.
#[pyclass(name = "StreamSession", module = "qrx")]
struct PyStreamSession {
    inner: Option<StreamSession>,
}

impl PyStreamSession {
    fn session(&mut self) -> PyResult<&mut StreamSession> {
        self.inner
            .as_mut()
            .ok_or_else(|| PyRuntimeError::new_err("session already finalized"))
    }
}

#[pymethods]
impl PyStreamSession {
    #[new]
    fn new(params: &PyParams, r: &PyBitVector, y: &PyBitVector) -> PyResult<Self> {
        let seeds = SeedBundle::new(r.inner.clone(), y.inner.clone());
        let inner = StreamSession::prepare(params.inner, seeds).map_err(to_py)?;
        Ok(Self { inner: Some(inner) })
    }

    #[getter]
    fn remaining(&mut self) -> PyResult<usize> {
        Ok(self.session()?.remaining())
    }

    /// XOR the next raw chunk against the mask; returns output bits that
    /// became final.
    fn process_chunk(&mut self, chunk: &PyBitVector) -> PyResult<PyBitVector> {
        self.session()?
            .process_chunk(&chunk.inner)
            .map(Into::into)
            .map_err(to_py)
    }

    /// Returns `(output, next_r, total_log2_eps)`.
    fn finalize(&mut self) -> PyResult<(PyBitVector, PyBitVector, f64)> {
        self.session()?;
        let done = self.inner.take().expect("checked above").finalize().map_err(to_py)?;
        Ok((done.output.into(), done.next_r.into(), done.ledger.total_log2_eps()))
    }
}

/// `(statistic, p_value)` of the frequency test.
#[pyfunction]
fn monobit(bits: &PyBitVector) -> (f64, f64) {
    let t = sanity::monobit(&bits.inner);
    (t.statistic, t.p_value)
}

/// `(statistic, p_value)` of the runs test.
#[pyfunction]
fn runs(bits: &PyBitVector) -> (f64, f64) {
    let t = sanity::runs(&bits.inner);
    (t.statistic, t.p_value)
}

#[pymodule]
fn qrx(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyBitVector>()?;
    m.add_class::<PyParams>()?;
    m.add_class::<PyStreamSession>()?;
    m.add_function(wrap_pyfunction!(linear_conv, m)?)?;
    m.add_function(wrap_pyfunction!(cyclic_conv, m)?)?;
    m.add_function(wrap_pyfunction!(output_length, m)?)?;
    m.add_function(wrap_pyfunction!(seed_lengths, m)?)?;
    m.add_function(wrap_pyfunction!(next_circulant_prime, m)?)?;
    m.add_function(wrap_pyfunction!(circulant_primes, m)?)?;
    m.add_function(wrap_pyfunction!(predicted_ops, m)?)?;
    m.add_function(wrap_pyfunction!(kernel_length, m)?)?;
    m.add_function(wrap_pyfunction!(block_extract, m)?)?;
    m.add_function(wrap_pyfunction!(prepare_mask, m)?)?;
    m.add_function(wrap_pyfunction!(stream_extract, m)?)?;
    m.add_function(wrap_pyfunction!(monobit, m)?)?;
    m.add_function(wrap_pyfunction!(runs, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_parse() {
        assert!(matches!(backend("ntt"), Ok(Backend::Ntt)));
        assert!(matches!(family("circulant"), Ok(Family::Circulant)));
        assert!(matches!(mode("stream"), Ok(Mode::Stream)));
    }
}
