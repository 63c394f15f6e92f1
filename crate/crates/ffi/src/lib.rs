//! C interface to the decolab models.
//!
//! Density matrices and Wigner functions are opaque handles owned by the
//! caller and released with the matching `*_free` function. Every fallible
//! call returns a [`DlStatus`]; the message of the last failure on the
//! calling thread is available through [`dl_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use decolab::master::{CaldeiraLeggettModel, FreeDecoherenceModel, Propagator, Scheme};
use decolab::qcore::{
    build_gaussian_packet, cat_state, coherence_length, DensityMatrix, SpatialGrid,
};
use decolab::rates::{
    apply_spatial_decoherence, gravity_coherence_width, gravity_rate, localization_rate,
    GravityScenario, ScatteringEnvironment,
};
use decolab::tolerance::BOUNDARY_LEAK;
use decolab::wigner::{wigner_transform, WignerFunction};
use decolab::zeno::{
    evolve_chiral, left_population, left_state_density, repeated_measurement_survival,
    survival_probability, ChiralModel, DecaySystem,
};
use decolab::Error;

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidGrid = 3,
    BoundaryLeak = 4,
    StabilityViolation = 5,
    Numerical = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

/// Density matrix on a spatial grid.
pub struct DlDensityMatrix(DensityMatrix);

/// Wigner function sampled on an (x, p) grid.
pub struct DlWignerFunction(WignerFunction);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(err: &Error) -> DlStatus {
    match err {
        Error::InvalidGrid(_) | Error::GridTooCoarse { .. } | Error::GridTooNarrow { .. } => {
            DlStatus::InvalidGrid
        }
        Error::BoundaryLeak { .. } => DlStatus::BoundaryLeak,
        Error::StabilityViolation { .. } => DlStatus::StabilityViolation,
        Error::InvalidParameter { .. } | Error::RegimeError(_) => DlStatus::InvalidArgument,
        _ => DlStatus::Numerical,
    }
}

/// Runs `f`, recording errors and panics.
fn guard(f: impl FnOnce() -> Result<(), (DlStatus, String)>) -> DlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            DlStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside decolab");
            DlStatus::Panic
        }
    }
}

fn lift<T>(r: decolab::Result<T>) -> Result<T, (DlStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(name: &str) -> (DlStatus, String) {
    (DlStatus::NullPointer, format!("`{name}` is null"))
}

unsafe fn deref<'a, T>(p: *const T, name: &str) -> Result<&'a T, (DlStatus, String)> {
    p.as_ref().ok_or_else(|| null(name))
}

unsafe fn deref_mut<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, (DlStatus, String)> {
    p.as_mut().ok_or_else(|| null(name))
}

unsafe fn write<T>(out: *mut T, value: T, name: &str) -> Result<(), (DlStatus, String)> {
    if out.is_null() {
        return Err(null(name));
    }
    out.write(value);
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn dl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length without the NUL, or
/// 0 when the last call succeeded.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn dl_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else {
            if !buf.is_null() && len > 0 {
                *buf = 0;
            }
            return 0;
        };
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast(), buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

fn grid(n: usize, x_min: f64, x_max: f64) -> Result<SpatialGrid, (DlStatus, String)> {
    lift(SpatialGrid::new(n, x_min, x_max))
}

unsafe fn emit_density(
    rho: DensityMatrix,
    out: *mut *mut DlDensityMatrix,
) -> Result<(), (DlStatus, String)> {
    write(out, Box::into_raw(Box::new(DlDensityMatrix(rho))), "out")
}

/// Pure Gaussian packet `|ψ⟩⟨ψ|` on `n` points spanning `[x_min, x_max]`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dl_density_gaussian(
    n: usize,
    x_min: f64,
    x_max: f64,
    center: f64,
    width: f64,
    momentum: f64,
    out: *mut *mut DlDensityMatrix,
) -> DlStatus {
    guard(|| {
        let psi = lift(build_gaussian_packet(
            grid(n, x_min, x_max)?,
            center,
            width,
            momentum,
        ))?;
        emit_density(DensityMatrix::pure(&psi), out)
    })
}

/// Even superposition of two packets at `±separation/2`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dl_density_cat(
    n: usize,
    x_min: f64,
    x_max: f64,
    separation: f64,
    width: f64,
    out: *mut *mut DlDensityMatrix,
) -> DlStatus {
    guard(|| {
        let psi = lift(cat_state(grid(n, x_min, x_max)?, separation, width))?;
        emit_density(DensityMatrix::pure(&psi), out)
    })
}

/// Releases a density matrix. Null is ignored.
///
/// # Safety
/// `rho` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn dl_density_free(rho: *mut DlDensityMatrix) {
    if !rho.is_null() {
        drop(Box::from_raw(rho));
    }
}

/// Number of grid points, or 0 for null.
///
/// # Safety
/// `rho` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dl_density_dim(rho: *const DlDensityMatrix) -> usize {
    rho.as_ref().map_or(0, |r| r.0.dim())
}

/// Trace, purity, Hermiticity residue and boundary ratio.
///
/// # Safety
/// `rho` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dl_density_diagnostics(
    rho: *const DlDensityMatrix,
    out: *mut DlDiagnostics,
) -> DlStatus {
    guard(|| {
        let r = &deref(rho, "rho")?.0;
        let d = DlDiagnostics {
            trace: r.trace(),
            purity: r.purity(),
            hermiticity_residue: r.hermiticity_residue(),
            boundary_ratio: r.boundary_ratio(),
        };
        write(out, d, "out")
    })
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct DlDiagnostics {
    pub trace: f64,
    pub purity: f64,
    pub hermiticity_residue: f64,
    pub boundary_ratio: f64,
}

/// Coherence length of the off-diagonal profile.
///
/// # Safety
/// `rho` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dl_density_coherence_length(
    rho: *const DlDensityMatrix,
    out: *mut f64,
) -> DlStatus {
    guard(|| {
        let l = lift(coherence_length(&deref(rho, "rho")?.0))?;
        write(out, l, "out")
    })
}

/// Copies the elements in row-major order into `re` and `im`, each of
/// length `len ≥ dim²`.
///
/// # Safety
/// `re` and `im` must be valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn dl_density_elements(
    rho: *const DlDensityMatrix,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> DlStatus {
    guard(|| {
        let m = deref(rho, "rho")?.0.elements();
        let n = m.nrows();
        if re.is_null() || im.is_null() {
            return Err(null("re/im"));
        }
        if len < n * n {
            return Err((
                DlStatus::BufferTooSmall,
                format!("need {} values, got {len}", n * n),
            ));
        }
        for i in 0..n {
            for j in 0..n {
                let z = m[(i, j)];
                *re.add(i * n + j) = z.re;
                *im.add(i * n + j) = z.im;
            }
        }
        Ok(())
    })
}

/// Multiplies the off-diagonal elements by `exp(-Λt(x-x')²)` in place.
///
/// # Safety
/// `rho` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn dl_density_localize(
    rho: *mut DlDensityMatrix,
    lambda: f64,
    t: f64,
) -> DlStatus {
    guard(|| {
        let r = deref_mut(rho, "rho")?;
        r.0 = lift(apply_spatial_decoherence(&r.0, lambda, t))?;
        Ok(())
    })
}

fn spatial(rho: &DensityMatrix) -> Result<SpatialGrid, (DlStatus, String)> {
    rho.grid()
        .copied()
        .ok_or_else(|| (DlStatus::InvalidArgument, Error::NotSpatial.to_string()))
}

/// Steps until done or until the edge amplitude reaches the leak threshold.
fn run(prop: &Propagator, rho: &mut DensityMatrix, steps: usize) -> Result<(), (DlStatus, String)> {
    for _ in 0..steps {
        lift(prop.step(rho))?;
        let ratio = rho.boundary_ratio();
        if ratio >= BOUNDARY_LEAK {
            return lift(Err(Error::BoundaryLeak {
                ratio,
                limit: BOUNDARY_LEAK,
            }));
        }
    }
    Ok(())
}

fn scheme(rk4: bool) -> Scheme {
    if rk4 {
        Scheme::Rk4
    } else {
        Scheme::SplitStep
    }
}

/// `steps` steps of the free decoherence equation in place. Stops with
/// `DL_STATUS_BOUNDARY_LEAK` once the packet reaches the grid edge.
///
/// # Safety
/// `rho` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn dl_density_evolve_free(
    rho: *mut DlDensityMatrix,
    mass: f64,
    lambda: f64,
    dt: f64,
    steps: usize,
    rk4: bool,
) -> DlStatus {
    guard(|| {
        let r = deref_mut(rho, "rho")?;
        let grid = spatial(&r.0)?;
        let model = lift(FreeDecoherenceModel::new(mass, lambda))?;
        let prop = lift(Propagator::free(grid, &model, dt, scheme(rk4)))?;
        run(&prop, &mut r.0, steps)
    })
}

/// `steps` steps of the Caldeira–Leggett equation in place, with the same
/// edge check as [`dl_density_evolve_free`].
///
/// # Safety
/// `rho` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn dl_density_evolve_cl(
    rho: *mut DlDensityMatrix,
    mass: f64,
    gamma: f64,
    temperature: f64,
    dt: f64,
    steps: usize,
    rk4: bool,
) -> DlStatus {
    guard(|| {
        let r = deref_mut(rho, "rho")?;
        let grid = spatial(&r.0)?;
        let model = lift(CaldeiraLeggettModel::new(mass, gamma, temperature))?;
        let prop = lift(Propagator::caldeira_leggett(grid, &model, dt, scheme(rk4)))?;
        run(&prop, &mut r.0, steps)
    })
}

/// Wigner transform of a density matrix.
///
/// # Safety
/// `rho` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dl_wigner_transform(
    rho: *const DlDensityMatrix,
    out: *mut *mut DlWignerFunction,
) -> DlStatus {
    guard(|| {
        let w = lift(wigner_transform(&deref(rho, "rho")?.0))?;
        write(out, Box::into_raw(Box::new(DlWignerFunction(w))), "out")
    })
}

/// Releases a Wigner function. Null is ignored.
///
/// # Safety
/// `w` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn dl_wigner_free(w: *mut DlWignerFunction) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

/// Number of x and p samples.
///
/// # Safety
/// `w` must be a live handle; `nx`, `np` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dl_wigner_shape(
    w: *const DlWignerFunction,
    nx: *mut usize,
    np: *mut usize,
) -> DlStatus {
    guard(|| {
        let (a, b) = deref(w, "w")?.0.values().shape();
        write(nx, a, "nx")?;
        write(np, b, "np")
    })
}

/// Copies `W(x_i, p_j)` to `buf[i * np + j]`, and the axes to `x` (length
/// nx) and `p` (length np) when they are not null.
///
/// # Safety
/// `buf` must be valid for `len` writes; `x`, `p` null or large enough.
#[no_mangle]
pub unsafe extern "C" fn dl_wigner_values(
    w: *const DlWignerFunction,
    buf: *mut f64,
    len: usize,
    x: *mut f64,
    p: *mut f64,
) -> DlStatus {
    guard(|| {
        let w = &deref(w, "w")?.0;
        let v = w.values();
        let (nx, np) = v.shape();
        if buf.is_null() {
            return Err(null("buf"));
        }
        if len < nx * np {
            return Err((
                DlStatus::BufferTooSmall,
                format!("need {} values, got {len}", nx * np),
            ));
        }
        for i in 0..nx {
            for j in 0..np {
                *buf.add(i * np + j) = v[(i, j)];
            }
        }
        if !x.is_null() {
            ptr::copy_nonoverlapping(w.x_points().as_ptr(), x, nx);
        }
        if !p.is_null() {
            ptr::copy_nonoverlapping(w.p_points().as_ptr(), p, np);
        }
        Ok(())
    })
}

/// `∫∫ W dx dp`.
///
/// # Safety
/// `w` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dl_wigner_normalisation(
    w: *const DlWignerFunction,
    out: *mut f64,
) -> DlStatus {
    guard(|| write(out, deref(w, "w")?.0.normalisation(), "out"))
}

/// `Λ = k² · flux · σ_eff`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dl_localization_rate(
    wave_number: f64,
    flux: f64,
    sigma_eff: f64,
    out: *mut f64,
) -> DlStatus {
    guard(|| {
        let env = lift(ScatteringEnvironment::new(
            "ffi",
            wave_number,
            flux,
            sigma_eff,
            1.0,
        ))?;
        write(out, localization_rate(&env), "out")
    })
}

/// Gravitational decoherence rate and resolvable `Δg/g` for a gas (CGS).
///
/// # Safety
/// `rate` and `dg_over_g` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dl_gravity(
    density: f64,
    particle_mass: f64,
    temperature: f64,
    box_size: f64,
    time: f64,
    g_ref: f64,
    rate: *mut f64,
    dg_over_g: *mut f64,
) -> DlStatus {
    guard(|| {
        let s = lift(GravityScenario::new(
            density,
            particle_mass,
            temperature,
            box_size,
            time,
        ))?;
        write(rate, gravity_rate(&s), "rate")?;
        write(dg_over_g, gravity_coherence_width(&s, g_ref), "dg_over_g")
    })
}

/// Two-level survival `P(t)` and `P_N(t)` with coupling `v`.
///
/// # Safety
/// `p` and `p_n` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dl_zeno_two_level(
    v: f64,
    t: f64,
    n: u32,
    p: *mut f64,
    p_n: *mut f64,
) -> DlStatus {
    guard(|| {
        if !(v.is_finite() && t.is_finite() && t >= 0.0) {
            return Err((
                DlStatus::InvalidArgument,
                "v and t must be finite, t >= 0".into(),
            ));
        }
        let sys = DecaySystem::two_level(v);
        write(p, survival_probability(&sys, t), "p")?;
        write(p_n, lift(repeated_measurement_survival(&sys, t, n))?, "p_n")
    })
}

/// Left-handed population at `t` starting from the left state.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dl_chiral_left_population(
    delta: f64,
    lambda: f64,
    t: f64,
    out: *mut f64,
) -> DlStatus {
    guard(|| {
        let model = lift(ChiralModel::new(delta, lambda))?;
        let rho = lift(evolve_chiral(&model, &left_state_density(), t))?;
        write(out, left_population(&rho), "out")
    })
}
