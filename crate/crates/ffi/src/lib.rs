//! C ABI over `poissonlab`.
//!
//! Objects cross the boundary as opaque handles created by `pl_*_new`-style
//! constructors and released by the matching `pl_*_free`. Every fallible call
//! returns a [`PlStatus`]; on failure a message for the calling thread is
//! available through [`pl_last_error_message`]. Matrices are written row-major.
//! Text outputs use caller buffers: the full length including the terminating
//! NUL is stored in `needed`, and `PL_STATUS_BUFFER_TOO_SMALL` is returned when
//! `capacity` is short.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

use poissonlab::harness::{self, Config, Overrides, RunOutcome};
use poissonlab::liealg::{AlgebraDef, LieAlgebra};
use poissonlab::matgroups::MatrixLieGroup;
use poissonlab::numcore::Vector;
use poissonlab::poisson::{jacobi_residual_pts, PoissonStructure};
use poissonlab::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Config = 3,
    DimensionMismatch = 4,
    Numerical = 5,
    Unknown = 6,
    BufferTooSmall = 7,
    IndexOutOfRange = 8,
    Panic = 9,
}

/// One report record in plain data. `residual` is NaN when the check could
/// not be evaluated.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlRecord {
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub samples: usize,
    pub seed: u64,
}

pub struct PlAlgebra(LieAlgebra);
pub struct PlGroup(MatrixLieGroup);
pub struct PlPoisson(PoissonStructure);
pub struct PlReport(RunOutcome);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

struct Failure(PlStatus, String);

type Outcome = std::result::Result<(), Failure>;

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Config(_) => PlStatus::Config,
            Error::DimensionMismatch { .. } => PlStatus::DimensionMismatch,
            Error::Unknown { .. } => PlStatus::Unknown,
            _ => PlStatus::Numerical,
        };
        Failure(status, e.to_string())
    }
}

fn fail(status: PlStatus, msg: impl Into<String>) -> Failure {
    Failure(status, msg.into())
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn guard(f: impl FnOnce() -> Outcome) -> PlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            PlStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside poissonlab".into());
            PlStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(fail(PlStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(PlStatus::InvalidUtf8, "string is not UTF-8"))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| fail(PlStatus::NullPointer, "null handle"))
}

unsafe fn slice<'a>(p: *const f64, len: usize) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(fail(PlStatus::NullPointer, "null input array"));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Outcome {
    if out.is_null() {
        return Err(fail(PlStatus::NullPointer, "null output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_array(out: *mut f64, capacity: usize, values: &[f64]) -> Outcome {
    if capacity < values.len() {
        return Err(fail(
            PlStatus::BufferTooSmall,
            format!("output needs {} entries, got {capacity}", values.len()),
        ));
    }
    if out.is_null() && !values.is_empty() {
        return Err(fail(PlStatus::NullPointer, "null output array"));
    }
    std::ptr::copy_nonoverlapping(values.as_ptr(), out, values.len());
    Ok(())
}

unsafe fn write_text(s: &str, buf: *mut c_char, capacity: usize, needed: *mut usize) -> Outcome {
    let len = s.len() + 1;
    if !needed.is_null() {
        needed.write(len);
    }
    if capacity < len {
        return Err(fail(PlStatus::BufferTooSmall, format!("text needs {len} bytes, got {capacity}")));
    }
    if buf.is_null() {
        return Err(fail(PlStatus::NullPointer, "null output buffer"));
    }
    std::ptr::copy_nonoverlapping(s.as_ptr().cast::<c_char>(), buf, s.len());
    buf.add(s.len()).write(0);
    Ok(())
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

unsafe fn release<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Row-major copy of a column-major matrix.
fn row_major(m: &poissonlab::numcore::Matrix) -> Vec<f64> {
    m.transpose().as_slice().to_vec()
}

/// Message of the last failed call on this thread, empty after a success.
///
/// # Safety
/// `buf` must point to `capacity` writable bytes or be null with `capacity` 0.
#[no_mangle]
pub unsafe extern "C" fn pl_last_error_message(buf: *mut c_char, capacity: usize, needed: *mut usize) -> PlStatus {
    let msg = LAST_ERROR.with(|e| e.borrow().clone());
    match write_text(&msg, buf, capacity, needed) {
        Ok(()) => PlStatus::Ok,
        Err(Failure(status, _)) => status,
    }
}

/// Static NUL-terminated version string.
#[no_mangle]
pub extern "C" fn pl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Catalog algebra: `so3`, `sl2`, `h3`, `abelian<n>`, `broken`.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pl_algebra_by_name(name: *const c_char, out: *mut *mut PlAlgebra) -> PlStatus {
    guard(|| {
        let g = LieAlgebra::by_name(text(name)?)?;
        write_out(out, boxed(PlAlgebra(g)))
    })
}

/// Algebra from `count` rows `[i, j, k, c]` (1-based) meaning `c^k_ij = c`,
/// with `c^k_ji = −c` implied.
///
/// # Safety
/// `constants` must hold `4 * count` doubles; `name` NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pl_algebra_from_constants(
    name: *const c_char,
    dim: usize,
    constants: *const f64,
    count: usize,
    out: *mut *mut PlAlgebra,
) -> PlStatus {
    guard(|| {
        let rows = slice(constants, 4 * count)?;
        let def = AlgebraDef {
            name: text(name)?.to_string(),
            dim,
            constants: rows.chunks_exact(4).map(|r| [r[0], r[1], r[2], r[3]]).collect(),
        };
        write_out(out, boxed(PlAlgebra(def.build()?)))
    })
}

/// # Safety
/// `algebra` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pl_algebra_dim(algebra: *const PlAlgebra, out: *mut usize) -> PlStatus {
    guard(|| write_out(out, handle(algebra)?.0.dim()))
}

/// # Safety
/// `algebra` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pl_algebra_jacobi_residual(algebra: *const PlAlgebra, out: *mut f64) -> PlStatus {
    guard(|| write_out(out, handle(algebra)?.0.jacobi_residual()))
}

/// `[x, y]` written to `out`; all three arrays have the algebra dimension.
///
/// # Safety
/// `x`, `y` must hold `dim` doubles and `out` `capacity` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn pl_algebra_bracket(
    algebra: *const PlAlgebra,
    x: *const f64,
    y: *const f64,
    dim: usize,
    out: *mut f64,
    capacity: usize,
) -> PlStatus {
    guard(|| {
        let g = &handle(algebra)?.0;
        let (x, y) = (Vector::from_column_slice(slice(x, dim)?), Vector::from_column_slice(slice(y, dim)?));
        let z = g.bracket(&x, &y)?;
        write_array(out, capacity, z.as_slice())
    })
}

/// # Safety
/// `algebra` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pl_algebra_free(algebra: *mut PlAlgebra) {
    release(algebra)
}

/// Catalog group: `r<n>`, `h3`, `so3`, `sl2`.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pl_group_by_name(name: *const c_char, out: *mut *mut PlGroup) -> PlStatus {
    guard(|| {
        let g = MatrixLieGroup::by_name(text(name)?)?;
        write_out(out, boxed(PlGroup(g)))
    })
}

/// # Safety
/// `group` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pl_group_dim(group: *const PlGroup, out: *mut usize) -> PlStatus {
    guard(|| write_out(out, handle(group)?.0.dim()))
}

/// Side length of the defining matrices.
///
/// # Safety
/// `group` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pl_group_matrix_size(group: *const PlGroup, out: *mut usize) -> PlStatus {
    guard(|| write_out(out, handle(group)?.0.size()))
}

/// `exp(Σ x_i E_i)` as a row-major `size × size` matrix.
///
/// # Safety
/// `x` must hold `dim` doubles and `out` `capacity` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn pl_group_exp(
    group: *const PlGroup,
    x: *const f64,
    dim: usize,
    out: *mut f64,
    capacity: usize,
) -> PlStatus {
    guard(|| {
        let g = &handle(group)?.0;
        if dim != g.dim() {
            return Err(Error::DimensionMismatch { expected: g.dim(), got: dim }.into());
        }
        let m = g.exp(&Vector::from_column_slice(slice(x, dim)?));
        write_array(out, capacity, &row_major(&m))
    })
}

/// # Safety
/// `group` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pl_group_free(group: *mut PlGroup) {
    release(group)
}

/// Lie–Poisson structure on the dual of `algebra`.
///
/// # Safety
/// `algebra` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pl_poisson_lie(algebra: *const PlAlgebra, out: *mut *mut PlPoisson) -> PlStatus {
    guard(|| {
        let pi = PoissonStructure::lie_poisson(&handle(algebra)?.0);
        write_out(out, boxed(PlPoisson(pi)))
    })
}

/// Canonical structure on `R^(2n)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pl_poisson_symplectic(n: usize, out: *mut *mut PlPoisson) -> PlStatus {
    guard(|| {
        if n == 0 {
            return Err(fail(PlStatus::DimensionMismatch, "symplectic structure needs n >= 1"));
        }
        write_out(out, boxed(PlPoisson(PoissonStructure::constant_symplectic(n))))
    })
}

/// # Safety
/// `pi` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pl_poisson_dim(pi: *const PlPoisson, out: *mut usize) -> PlStatus {
    guard(|| write_out(out, handle(pi)?.0.dim()))
}

/// `π^{ij}(x)` as a row-major `dim × dim` matrix.
///
/// # Safety
/// `x` must hold `dim` doubles and `out` `capacity` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn pl_poisson_eval(
    pi: *const PlPoisson,
    x: *const f64,
    dim: usize,
    out: *mut f64,
    capacity: usize,
) -> PlStatus {
    guard(|| {
        let pi = &handle(pi)?.0;
        if dim != pi.dim() {
            return Err(Error::DimensionMismatch { expected: pi.dim(), got: dim }.into());
        }
        write_array(out, capacity, &row_major(&pi.eval(slice(x, dim)?)))
    })
}

/// Jacobi residual over `count` points stored back to back.
///
/// # Safety
/// `points` must hold `count * dim` doubles and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn pl_poisson_jacobi_residual(
    pi: *const PlPoisson,
    points: *const f64,
    count: usize,
    out: *mut f64,
) -> PlStatus {
    guard(|| {
        let pi = &handle(pi)?.0;
        let n = pi.dim();
        let pts: Vec<Vector> = slice(points, n * count)?
            .chunks_exact(n)
            .map(Vector::from_column_slice)
            .collect();
        write_out(out, jacobi_residual_pts(pi, &pts)?)
    })
}

/// # Safety
/// `pi` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pl_poisson_free(pi: *mut PlPoisson) {
    release(pi)
}

/// Runs the suites of a TOML configuration. `seed` may be null to keep the
/// configured seed. A configuration error returns `PL_STATUS_CONFIG`; failed
/// checks still produce a report.
///
/// # Safety
/// `config` must be NUL-terminated, `seed` null or readable, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pl_run(config: *const c_char, seed: *const u64, out: *mut *mut PlReport) -> PlStatus {
    guard(|| {
        let config = Config::parse(text(config)?)?;
        let overrides = Overrides {
            seed: seed.as_ref().copied(),
            suite: None,
        };
        let outcome = harness::run(&config, &overrides)?;
        write_out(out, boxed(PlReport(outcome)))
    })
}

/// # Safety
/// `report` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pl_report_len(report: *const PlReport, out: *mut usize) -> PlStatus {
    guard(|| write_out(out, handle(report)?.0.records.len()))
}

/// Exit code the command line would return for this report, or -1 for a null handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pl_report_exit_code(report: *const PlReport) -> i32 {
    report.as_ref().map_or(-1, |r| r.0.exit_code())
}

/// # Safety
/// `report` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pl_report_record(report: *const PlReport, index: usize, out: *mut PlRecord) -> PlStatus {
    guard(|| {
        let records = &handle(report)?.0.records;
        let r = records
            .get(index)
            .ok_or_else(|| fail(PlStatus::IndexOutOfRange, format!("record {index} of {}", records.len())))?;
        write_out(
            out,
            PlRecord {
                residual: r.residual.unwrap_or(f64::NAN),
                tolerance: r.tolerance,
                passed: r.passed(),
                samples: r.samples,
                seed: r.seed,
            },
        )
    })
}

/// `suite/check` name of a record.
///
/// # Safety
/// `buf` must point to `capacity` writable bytes; `needed` null or writable.
#[no_mangle]
pub unsafe extern "C" fn pl_report_check_name(
    report: *const PlReport,
    index: usize,
    buf: *mut c_char,
    capacity: usize,
    needed: *mut usize,
) -> PlStatus {
    guard(|| {
        let records = &handle(report)?.0.records;
        let r = records
            .get(index)
            .ok_or_else(|| fail(PlStatus::IndexOutOfRange, format!("record {index} of {}", records.len())))?;
        write_text(&format!("{}/{}", r.suite, r.check), buf, capacity, needed)
    })
}

/// The report as JSON lines.
///
/// # Safety
/// `buf` must point to `capacity` writable bytes; `needed` null or writable.
#[no_mangle]
pub unsafe extern "C" fn pl_report_jsonl(
    report: *const PlReport,
    buf: *mut c_char,
    capacity: usize,
    needed: *mut usize,
) -> PlStatus {
    guard(|| write_text(&handle(report)?.0.jsonl(), buf, capacity, needed))
}

/// # Safety
/// `report` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pl_report_free(report: *mut PlReport) {
    release(report)
}

/// Text of `poissonlab list`.
///
/// # Safety
/// `buf` must point to `capacity` writable bytes; `needed` null or writable.
#[no_mangle]
pub unsafe extern "C" fn pl_catalog(buf: *mut c_char, capacity: usize, needed: *mut usize) -> PlStatus {
    guard(|| write_text(&harness::list_catalog(), buf, capacity, needed))
}
