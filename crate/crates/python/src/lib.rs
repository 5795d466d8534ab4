use pyo3::prelude::*;

#[pymodule]
fn urnlab(_m: &Bound<'_, PyModule>) -> PyResult<()> {
    Ok(())
}
