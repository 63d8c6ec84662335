//! C ABI for `bandkern`.
//!
//! A space is created once from roots and weights and passed by opaque
//! pointer. Every function returns a [`BkStatus`]; on failure the message is
//! kept per thread and can be copied out with [`bk_last_error_message`].
//! Output arrays are caller-allocated and their lengths are passed
//! explicitly. No function unwinds across the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use bandkern::basis::kernel_eval;
use bandkern::decomposition::{decompose, reconstruct, BoundaryMethod};
use bandkern::multiplier::{constant_expansion, mz_column};
use bandkern::recursion::{c_column, containment_report, BoundednessVerdict, ContainmentOptions};
use bandkern::{Angle, BoundaryConfig, Complex, Error, Space, WeightSequence};

/// Status codes. Zero is success.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BkStatus {
    Ok = 0,
    Config = 1,
    Domain = 2,
    Truncation = 3,
    IllConditioned = 4,
    SearchFailure = 5,
    Precondition = 6,
    Internal = 7,
    /// A required pointer was null.
    NullPointer = 8,
    /// An output buffer is shorter than required.
    BufferTooSmall = 9,
    /// A panic was caught inside the library.
    Panic = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BkComplex {
    pub re: f64,
    pub im: f64,
}

impl From<BkComplex> for Complex {
    fn from(c: BkComplex) -> Complex {
        Complex::new(c.re, c.im)
    }
}

impl From<Complex> for BkComplex {
    fn from(c: Complex) -> BkComplex {
        BkComplex { re: c.re, im: c.im }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BkWeightKind {
    /// `a_n = 1 - p/(n + offset)`.
    Harmonic = 0,
    /// `a_n = 1 - 1/(n + 2)^p`; `offset` is ignored.
    PowerLaw = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BkWeights {
    pub kind: BkWeightKind,
    pub p: f64,
    pub offset: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BkVerdict {
    LikelyBounded = 0,
    LikelyUnbounded = 1,
    Inconclusive = 2,
}

/// Opaque handle to a configured space.
pub struct BkSpace {
    inner: Space,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(err: &Error) -> BkStatus {
    match err {
        Error::Config(_) => BkStatus::Config,
        Error::Domain { .. } => BkStatus::Domain,
        Error::Truncation(_) => BkStatus::Truncation,
        Error::IllConditioned { .. } => BkStatus::IllConditioned,
        Error::SearchFailure { .. } => BkStatus::SearchFailure,
        Error::Precondition(_) => BkStatus::Precondition,
        Error::Internal(_) => BkStatus::Internal,
    }
}

struct Fail(BkStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(name: &str) -> Fail {
    Fail(BkStatus::NullPointer, format!("{name} is null"))
}

fn short(name: &str, need: usize, have: usize) -> Fail {
    Fail(BkStatus::BufferTooSmall, format!("{name} holds {have} values, {need} required"))
}

/// Runs `f`, recording any error or panic as the thread's last error.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> BkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BkStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            BkStatus::Panic
        }
    }
}

unsafe fn input<'a, T>(p: *const T, len: usize, name: &str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(name));
    }
    Ok(slice::from_raw_parts(p, len))
}

unsafe fn output<'a, T>(p: *mut T, len: usize, need: usize, name: &str) -> Result<&'a mut [T], Fail> {
    if len < need {
        return Err(short(name, need, len));
    }
    if need == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(null(name));
    }
    Ok(slice::from_raw_parts_mut(p, len))
}

unsafe fn space_ref<'a>(s: *const BkSpace) -> Result<&'a Space, Fail> {
    s.as_ref().map(|s| &s.inner).ok_or_else(|| null("space"))
}

fn weights(w: BkWeights) -> Result<WeightSequence, Fail> {
    Ok(match w.kind {
        BkWeightKind::Harmonic => WeightSequence::harmonic(w.p, w.offset)?,
        BkWeightKind::PowerLaw => WeightSequence::power_law(w.p)?,
    })
}

unsafe fn store_space(out: *mut *mut BkSpace, space: Space) -> Result<(), Fail> {
    *out = Box::into_raw(Box::new(BkSpace { inner: space }));
    Ok(())
}

/// Copies the calling thread's last error message into `buf` (NUL
/// terminated, truncated to `len - 1` bytes). Returns the full message length
/// in bytes, excluding the terminator.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn bk_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn bk_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(s) => s,
        Err(_) => panic!("version string"),
    };
    VERSION.as_ptr()
}

/// Creates a space with roots `exp(2 pi i num_j/den_j)`.
///
/// # Safety
/// `nums` and `dens` must be valid for `j` values; `out` must be valid for a
/// write. Free the result with [`bk_space_free`].
#[no_mangle]
pub unsafe extern "C" fn bk_space_new_angles(
    nums: *const i64,
    dens: *const u64,
    j: usize,
    w: BkWeights,
    out: *mut *mut BkSpace,
) -> BkStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let nums = input(nums, j, "nums")?;
        let dens = input(dens, j, "dens")?;
        let angles = nums
            .iter()
            .zip(dens)
            .map(|(&n, &d)| Angle::new(n, d))
            .collect::<bandkern::Result<Vec<_>>>()?;
        let space = Space::new(BoundaryConfig::from_angles(&angles)?, weights(w)?)?;
        store_space(out, space)
    })
}

/// Creates a space from explicit unimodular roots.
///
/// # Safety
/// `roots` must be valid for `j` values; `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn bk_space_new_points(
    roots: *const BkComplex,
    j: usize,
    w: BkWeights,
    out: *mut *mut BkSpace,
) -> BkStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let pts: Vec<Complex> = input(roots, j, "roots")?.iter().map(|&c| c.into()).collect();
        let space = Space::new(BoundaryConfig::from_points(&pts)?, weights(w)?)?;
        store_space(out, space)
    })
}

/// Frees a space. Null is ignored.
///
/// # Safety
/// `space` must be null or a pointer returned by a `bk_space_new_*` function
/// that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn bk_space_free(space: *mut BkSpace) {
    if !space.is_null() {
        drop(Box::from_raw(space));
    }
}

/// Number of roots `J`, or 0 for a null space.
///
/// # Safety
/// `space` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bk_space_roots(space: *const BkSpace) -> usize {
    space.as_ref().map_or(0, |s| s.inner.j())
}

/// Coefficients `beta_0..beta_J` of `phi`; `out` needs `J + 1` entries.
///
/// # Safety
/// `space` must be a live handle and `out` valid for `len` values.
#[no_mangle]
pub unsafe extern "C" fn bk_phi_coeffs(space: *const BkSpace, out: *mut BkComplex, len: usize) -> BkStatus {
    guard(|| {
        let s = space_ref(space)?;
        let out = output(out, len, s.j() + 1, "out")?;
        for (k, o) in out.iter_mut().take(s.j() + 1).enumerate() {
            *o = s.beta(k).into();
        }
        Ok(())
    })
}

/// `K(z, w)` with certified truncation error at most `tol`.
///
/// # Safety
/// `space` must be a live handle; `value` must be valid for a write;
/// `tail_bound` may be null.
#[no_mangle]
pub unsafe extern "C" fn bk_kernel_eval(
    space: *const BkSpace,
    z: BkComplex,
    w: BkComplex,
    tol: f64,
    value: *mut BkComplex,
    tail_bound: *mut f64,
) -> BkStatus {
    guard(|| {
        let s = space_ref(space)?;
        if value.is_null() {
            return Err(null("value"));
        }
        let k = kernel_eval(s, z.into(), w.into(), tol)?;
        *value = k.value.into();
        if !tail_bound.is_null() {
            *tail_bound = k.tail_bound;
        }
        Ok(())
    })
}

/// Column `n` of `C`: `out[k] = c_{n+k,n}` for `k = 0..=k_max`; `out` needs
/// `k_max + 1` entries.
///
/// # Safety
/// `space` must be a live handle and `out` valid for `len` values.
#[no_mangle]
pub unsafe extern "C" fn bk_c_column(
    space: *const BkSpace,
    n: usize,
    k_max: usize,
    out: *mut BkComplex,
    len: usize,
) -> BkStatus {
    guard(|| {
        let s = space_ref(space)?;
        let need = k_max.checked_add(1).ok_or_else(|| short("out", usize::MAX, len))?;
        let out = output(out, len, need, "out")?;
        for (o, v) in out.iter_mut().zip(c_column(s, n, k_max)) {
            *o = v.into();
        }
        Ok(())
    })
}

/// Column `n` of the multiplication-by-`z` matrix: `out[m] = c_{n+1+m,n}`
/// for `m < count`, with `count >= J + 1`; `out` needs `count` entries.
///
/// # Safety
/// `space` must be a live handle and `out` valid for `len` values.
#[no_mangle]
pub unsafe extern "C" fn bk_mz_column(
    space: *const BkSpace,
    n: usize,
    count: usize,
    out: *mut BkComplex,
    len: usize,
) -> BkStatus {
    guard(|| {
        let s = space_ref(space)?;
        let col = mz_column(s, n, count)?;
        let out = output(out, len, col.entries.len(), "out")?;
        for (o, &v) in out.iter_mut().zip(&col.entries) {
            *o = v.into();
        }
        Ok(())
    })
}

/// Basis coefficients `c_0..c_{len-1}` of the constant function 1.
///
/// # Safety
/// `space` must be a live handle and `out` valid for `len` values.
#[no_mangle]
pub unsafe extern "C" fn bk_constant_expansion(space: *const BkSpace, out: *mut BkComplex, len: usize) -> BkStatus {
    guard(|| {
        let s = space_ref(space)?;
        let e = constant_expansion(s, len, Default::default())?;
        let out = output(out, len, len, "out")?;
        for (o, &v) in out.iter_mut().zip(&e.coeffs) {
            *o = v.into();
        }
        Ok(())
    })
}

/// Basis coefficients `alpha_0..alpha_{len-1}` of `phi g + sum_j b_j K(., z_j)`.
/// `b` holds `J` values.
///
/// # Safety
/// `space` must be a live handle, `g` valid for `g_len` values, `b` for `J`
/// values and `alpha` for `len` values.
#[no_mangle]
pub unsafe extern "C" fn bk_reconstruct(
    space: *const BkSpace,
    g: *const BkComplex,
    g_len: usize,
    b: *const BkComplex,
    alpha: *mut BkComplex,
    len: usize,
) -> BkStatus {
    guard(|| {
        let s = space_ref(space)?;
        if g_len > len {
            return Err(Fail(BkStatus::Config, format!("g has {g_len} values, more than len = {len}")));
        }
        let g: Vec<Complex> = input(g, g_len, "g")?.iter().map(|&c| c.into()).collect();
        let b: Vec<Complex> = input(b, s.j(), "b")?.iter().map(|&c| c.into()).collect();
        let r = reconstruct(s, &g, &b, len)?;
        let out = output(alpha, len, len, "alpha")?;
        for (o, &v) in out.iter_mut().zip(&r.alpha) {
            *o = v.into();
        }
        Ok(())
    })
}

/// Splits `f = sum alpha_n f_n` as `phi g + sum_j b_j K(., z_j)`. `g` needs
/// `len` entries, `b` needs `J`; `residual` may be null.
///
/// # Safety
/// `space` must be a live handle, `alpha` and `g` valid for `len` values and
/// `b` for `J` values.
#[no_mangle]
pub unsafe extern "C" fn bk_decompose(
    space: *const BkSpace,
    alpha: *const BkComplex,
    len: usize,
    g: *mut BkComplex,
    b: *mut BkComplex,
    residual: *mut f64,
) -> BkStatus {
    guard(|| {
        let s = space_ref(space)?;
        let alpha: Vec<Complex> = input(alpha, len, "alpha")?.iter().map(|&c| c.into()).collect();
        let d = decompose(s, &alpha, BoundaryMethod::TailFit)?;
        let g_out = output(g, len, len, "g")?;
        let b_out = output(b, s.j(), s.j(), "b")?;
        for (o, &v) in g_out.iter_mut().zip(&d.g) {
            *o = v.into();
        }
        for (o, &v) in b_out.iter_mut().zip(&d.b) {
            *o = v.into();
        }
        if !residual.is_null() {
            *residual = d.residual;
        }
        Ok(())
    })
}

/// Norms of the leading `sizes[i] x sizes[i]` sections of `C` and the growth
/// verdict. `sizes` must be strictly increasing; `norms` needs `count`
/// entries.
///
/// # Safety
/// `space` must be a live handle, `sizes` and `norms` valid for `count`
/// values and `verdict` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn bk_containment_norms(
    space: *const BkSpace,
    sizes: *const usize,
    count: usize,
    norms: *mut f64,
    verdict: *mut BkVerdict,
) -> BkStatus {
    guard(|| {
        let s = space_ref(space)?;
        if verdict.is_null() {
            return Err(null("verdict"));
        }
        let sizes = input(sizes, count, "sizes")?;
        let r = containment_report(s, sizes, ContainmentOptions::default())?;
        let out = output(norms, count, count, "norms")?;
        for (o, e) in out.iter_mut().zip(&r.norms) {
            *o = e.value;
        }
        *verdict = match r.verdict {
            BoundednessVerdict::LikelyBounded => BkVerdict::LikelyBounded,
            BoundednessVerdict::LikelyUnbounded => BkVerdict::LikelyUnbounded,
            BoundednessVerdict::Inconclusive => BkVerdict::Inconclusive,
        };
        Ok(())
    })
}
