//! Python bindings for the ORT run-length codec.

use ort_core::baselines;
use ort_core::bench::{self, Codec, CorpusItem, ReportFormat};
use ort_core::codec;
use ort_core::tree::{self, NodeIndex};
use ort_core::RepeatBitmap;
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyBytes, PyDict};

create_exception!(
    ortc,
    OrtError,
    PyValueError,
    "Raised for malformed input or invalid parameters."
);

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    OrtError::new_err(e.to_string())
}

#[pyclass(name = "CodecParams", module = "ortc", from_py_object)]
#[derive(Clone)]
struct PyCodecParams {
    #[pyo3(get, set)]
    passes: u32,
    #[pyo3(get, set)]
    min_run: u32,
}

#[pymethods]
impl PyCodecParams {
    #[new]
    #[pyo3(signature = (passes = 10, min_run = 3))]
    fn new(passes: u32, min_run: u32) -> PyResult<Self> {
        codec::CodecParams::new(passes, min_run).validate().map_err(err)?;
        Ok(Self { passes, min_run })
    }

    fn __repr__(&self) -> String {
        format!("CodecParams(passes={}, min_run={})", self.passes, self.min_run)
    }
}

impl PyCodecParams {
    fn inner(&self) -> codec::CodecParams {
        codec::CodecParams::new(self.passes, self.min_run)
    }
}

/// A pruned repetition tree over a bitmap of `length` positions.
#[pyclass(name = "OrtTree", module = "ortc", frozen)]
struct PyOrtTree {
    inner: tree::OrtTree,
    length: usize,
}

#[pymethods]
impl PyOrtTree {
    /// Builds the tree marking `positions` in a bitmap of `length` bits.
    #[staticmethod]
    fn from_positions(length: usize, positions: Vec<usize>) -> PyResult<Self> {
        if let Some(&p) = positions.iter().find(|&&p| p >= length) {
            return Err(OrtError::new_err(format!(
                "position {p} out of range for length {length}"
            )));
        }
        let bitmap = RepeatBitmap::from_positions(length, positions);
        Ok(Self {
            inner: tree::bitmap_to_tree(&bitmap),
            length,
        })
    }

    /// Parses a serialized tree; returns `(tree, bytes_consumed)`.
    #[staticmethod]
    fn parse(data: &[u8], length: usize) -> PyResult<(Self, usize)> {
        let (inner, used) = tree::parse_tree(data, length).map_err(err)?;
        Ok((Self { inner, length }, used))
    }

    #[getter]
    fn depth(&self) -> u32 {
        self.inner.depth()
    }

    #[getter]
    fn num_blocks(&self) -> usize {
        self.inner.num_blocks()
    }

    #[getter]
    fn node_count(&self) -> usize {
        self.inner.node_count()
    }

    /// `(block, byte)` pairs for every present leaf.
    fn leaves(&self) -> Vec<(usize, u8)> {
        self.inner.leaves().collect()
    }

    fn positions(&self) -> PyResult<Vec<usize>> {
        let bitmap = tree::tree_to_bitmap(&self.inner, self.length).map_err(err)?;
        Ok(bitmap.ones().collect())
    }

    fn to_bytes<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        PyBytes::new(py, &tree::serialize_tree(&self.inner))
    }

    fn __len__(&self) -> usize {
        self.inner.node_count()
    }

    fn __repr__(&self) -> String {
        format!(
            "OrtTree(length={}, depth={}, nodes={})",
            self.length,
            self.inner.depth(),
            self.inner.node_count()
        )
    }
}

#[pyclass(name = "PassFrame", module = "ortc", frozen)]
struct PyPassFrame {
    inner: codec::PassFrame,
}

#[pymethods]
impl PyPassFrame {
    /// Parses one frame; returns `(frame, bytes_consumed)`.
    #[staticmethod]
    fn parse(data: &[u8]) -> PyResult<(Self, usize)> {
        let (inner, used) = codec::PassFrame::parse(data).map_err(err)?;
        Ok((Self { inner }, used))
    }

    #[getter]
    fn mode(&self) -> &'static str {
        self.inner.mode.name()
    }

    #[getter]
    fn stride(&self) -> u8 {
        self.inner.stride
    }

    #[getter]
    fn input_len(&self) -> u64 {
        self.inner.input_len
    }

    #[getter]
    fn kept<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        PyBytes::new(py, &self.inner.kept)
    }

    #[getter]
    fn tree<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        PyBytes::new(py, &self.inner.tree)
    }

    fn decode<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyBytes>> {
        let out = codec::decode_pass(&self.inner).map_err(err)?;
        Ok(PyBytes::new(py, &out))
    }

    fn to_bytes<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        PyBytes::new(py, &self.inner.to_bytes())
    }

    fn __repr__(&self) -> String {
        format!(
            "PassFrame(mode={:?}, stride={}, input_len={}, kept_len={}, tree_len={})",
            self.inner.mode.name(),
            self.inner.stride,
            self.inner.input_len,
            self.inner.kept.len(),
            self.inner.tree.len()
        )
    }
}

#[pyclass(name = "BenchRow", module = "ortc", frozen)]
struct PyBenchRow {
    inner: bench::BenchRow,
}

#[pymethods]
impl PyBenchRow {
    #[getter]
    fn index(&self) -> usize {
        self.inner.index
    }

    #[getter]
    fn item(&self) -> &str {
        &self.inner.item
    }

    #[getter]
    fn codec(&self) -> &'static str {
        self.inner.codec.name()
    }

    #[getter]
    fn uncompressed(&self) -> u64 {
        self.inner.uncompressed
    }

    #[getter]
    fn compressed(&self) -> Option<u64> {
        self.inner.compressed.as_ref().ok().copied()
    }

    #[getter]
    fn error(&self) -> Option<String> {
        self.inner.compressed.as_ref().err().map(ToString::to_string)
    }

    #[getter]
    fn cr(&self) -> Option<f64> {
        self.inner.cr()
    }

    fn __repr__(&self) -> String {
        format!(
            "BenchRow(item={:?}, codec={:?}, cr={:?})",
            self.inner.item,
            self.inner.codec.name(),
            self.inner.cr()
        )
    }
}

#[pyfunction]
fn parent(r: u64) -> PyResult<u64> {
    tree::parent(NodeIndex(r)).map(|n| n.0).map_err(err)
}

#[pyfunction]
fn kth_child(r: u64, k: u8, node_count: u64) -> PyResult<u64> {
    tree::kth_child(NodeIndex(r), k, node_count).map(|n| n.0).map_err(err)
}

#[pyfunction]
fn tree_depth(num_blocks: usize) -> u32 {
    tree::tree_depth(num_blocks)
}

/// Positions marked as repeats of the byte `stride` places earlier.
#[pyfunction]
fn mark_equalities(data: &[u8], stride: usize, min_run: usize) -> PyResult<Vec<usize>> {
    if stride == 0 || min_run == 0 {
        return Err(OrtError::new_err("stride and min_run must be positive"));
    }
    Ok(codec::mark_equalities(data, stride, min_run).ones().collect())
}

#[pyfunction]
fn encode_pass(data: &[u8], stride: usize, min_run: u32) -> PyResult<PyPassFrame> {
    let inner = codec::encode_pass(data, stride, min_run).map_err(err)?;
    Ok(PyPassFrame { inner })
}

#[pyfunction]
#[pyo3(signature = (data, passes = 10, min_run = 3))]
fn compress<'py>(py: Python<'py>, data: &[u8], passes: u32, min_run: u32) -> PyResult<Bound<'py, PyBytes>> {
    let params = codec::CodecParams::new(passes, min_run);
    let out = py.detach(|| codec::compress(data, &params)).map_err(err)?;
    Ok(PyBytes::new(py, &out))
}

#[pyfunction]
fn compress_with<'py>(py: Python<'py>, data: &[u8], params: PyCodecParams) -> PyResult<Bound<'py, PyBytes>> {
    let out = codec::compress(data, &params.inner()).map_err(err)?;
    Ok(PyBytes::new(py, &out))
}

#[pyfunction]
fn decompress<'py>(py: Python<'py>, data: &[u8]) -> PyResult<Bound<'py, PyBytes>> {
    let out = py.detach(|| codec::decompress(data)).map_err(err)?;
    Ok(PyBytes::new(py, &out))
}

/// Container header and per-pass frame layout as a dict.
#[pyfunction]
fn inspect<'py>(py: Python<'py>, data: &[u8]) -> PyResult<Bound<'py, PyDict>> {
    let info = codec::inspect(data).map_err(err)?;
    let dict = PyDict::new(py);
    dict.set_item("version", info.version)?;
    dict.set_item("stored", info.stored)?;
    dict.set_item("pass_count", info.pass_count)?;
    dict.set_item("min_run", info.min_run)?;
    dict.set_item("orig_len", info.orig_len)?;
    dict.set_item("total_len", info.total_len)?;
    let frames = info
        .frames
        .iter()
        .map(|f| {
            let d = PyDict::new(py);
            d.set_item("mode", f.mode.name())?;
            d.set_item("stride", f.stride)?;
            d.set_item("input_len", f.input_len)?;
            d.set_item("kept_len", f.kept_len)?;
            d.set_item("tree_len", f.tree_len)?;
            d.set_item("encoded_len", f.encoded_len)?;
            Ok(d)
        })
        .collect::<PyResult<Vec<_>>>()?;
    dict.set_item("frames", frames)?;
    Ok(dict)
}

/// PRLC1 file form: flag byte followed by the body.
#[pyfunction]
#[pyo3(signature = (data, flag = None))]
fn prlc1_encode<'py>(py: Python<'py>, data: &[u8], flag: Option<u8>) -> Bound<'py, PyBytes> {
    let stream = match flag {
        Some(f) => baselines::prlc1_encode_with_flag(data, f),
        None => baselines::prlc1_encode(data),
    };
    PyBytes::new(py, &stream.to_bytes())
}

#[pyfunction]
fn prlc1_decode<'py>(py: Python<'py>, data: &[u8]) -> PyResult<Bound<'py, PyBytes>> {
    let stream = baselines::Prlc1Stream::from_bytes(data).map_err(err)?;
    let out = baselines::prlc1_decode(&stream).map_err(err)?;
    Ok(PyBytes::new(py, &out))
}

#[pyfunction]
fn prlc2_encode<'py>(py: Python<'py>, data: &[u8]) -> PyResult<Bound<'py, PyBytes>> {
    let out = baselines::prlc2_encode(data).map_err(err)?;
    Ok(PyBytes::new(py, &out))
}

#[pyfunction]
fn prlc2_decode<'py>(py: Python<'py>, data: &[u8]) -> PyResult<Bound<'py, PyBytes>> {
    let out = baselines::prlc2_decode(data).map_err(err)?;
    Ok(PyBytes::new(py, &out))
}

#[pyfunction]
fn compression_ratio(uncompressed: u64, compressed: u64) -> PyResult<f64> {
    bench::compression_ratio(uncompressed, compressed).map_err(err)
}

/// Benchmarks `(name, bytes)` items; one row per item and codec.
#[pyfunction]
#[pyo3(signature = (items, codecs = None, passes = 10, min_run = 3))]
fn run_bench(
    py: Python<'_>,
    items: Vec<(String, Vec<u8>)>,
    codecs: Option<Vec<String>>,
    passes: u32,
    min_run: u32,
) -> PyResult<Vec<PyBenchRow>> {
    let codecs = match codecs {
        Some(names) => names
            .iter()
            .map(|n| n.parse::<Codec>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(err)?,
        None => Codec::ALL.to_vec(),
    };
    let corpus: Vec<CorpusItem> = items
        .into_iter()
        .map(|(name, bytes)| CorpusItem::new(name, bytes))
        .collect();
    let params = codec::CodecParams::new(passes, min_run);
    let rows = py.detach(|| bench::run_bench(&corpus, &codecs, &params)).map_err(err)?;
    Ok(rows.into_iter().map(|inner| PyBenchRow { inner }).collect())
}

#[pyfunction]
#[pyo3(signature = (rows, format = "markdown"))]
fn render_report(rows: Vec<PyRef<'_, PyBenchRow>>, format: &str) -> PyResult<String> {
    let format: ReportFormat = format.parse().map_err(err)?;
    let rows: Vec<bench::BenchRow> = rows.iter().map(|r| r.inner.clone()).collect();
    Ok(bench::render_report(&rows, format))
}

#[pymodule]
fn ortc(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add("OrtError", m.py().get_type::<OrtError>())?;
    m.add("CONTAINER_HEADER_LEN", codec::CONTAINER_HEADER_LEN)?;
    m.add_class::<PyCodecParams>()?;
    m.add_class::<PyOrtTree>()?;
    m.add_class::<PyPassFrame>()?;
    m.add_class::<PyBenchRow>()?;
    m.add_function(wrap_pyfunction!(parent, m)?)?;
    m.add_function(wrap_pyfunction!(kth_child, m)?)?;
    m.add_function(wrap_pyfunction!(tree_depth, m)?)?;
    m.add_function(wrap_pyfunction!(mark_equalities, m)?)?;
    m.add_function(wrap_pyfunction!(encode_pass, m)?)?;
    m.add_function(wrap_pyfunction!(compress, m)?)?;
    m.add_function(wrap_pyfunction!(compress_with, m)?)?;
    m.add_function(wrap_pyfunction!(decompress, m)?)?;
    m.add_function(wrap_pyfunction!(inspect, m)?)?;
    m.add_function(wrap_pyfunction!(prlc1_encode, m)?)?;
    m.add_function(wrap_pyfunction!(prlc1_decode, m)?)?;
    m.add_function(wrap_pyfunction!(prlc2_encode, m)?)?;
    m.add_function(wrap_pyfunction!(prlc2_decode, m)?)?;
    m.add_function(wrap_pyfunction!(compression_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(run_bench, m)?)?;
    m.add_function(wrap_pyfunction!(render_report, m)?)?;
    Ok(())
}
