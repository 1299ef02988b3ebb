use gent_core::bures::{bures_from_kappa, SearchBudget};
use gent_core::cm::{uncertainty_determinant, CmFile};
use gent_core::relent::two_mode_objective;
use gent_core::standard_forms::to_standard_form_i;
use gent_core::{
    bures_entanglement, invariants, is_physical, is_separable, numeric_max_fidelity, rel_ent_entanglement, relent,
    symplectic_spectrum, Error, Invariants4, StandardFormI, SymmetricState, SymplecticSpectrum, TwoModeCM,
};
use serde::Serialize;

use crate::{CliError, VERSION};

#[derive(Serialize)]
struct CheckReport {
    version: &'static str,
    cm: CmFile,
    physical: bool,
    separable: Option<bool>,
    spectrum: Option<SymplecticSpectrum>,
    invariants: Invariants4,
    uncertainty_det: f64,
    standard_form: Option<StandardFormI>,
    rank_one_cross: Option<bool>,
}

fn cm_file(cm: &TwoModeCM) -> CmFile {
    CmFile { v: cm.rows() }
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("report serializes"));
}

pub fn check(cm: &TwoModeCM, json: bool) -> Result<u8, CliError> {
    let inv = invariants(cm);
    let phys = is_physical(cm);
    let (spectrum, reduction) = if phys.physical {
        (Some(symplectic_spectrum(cm)?), Some(to_standard_form_i(cm)?))
    } else {
        (None, None)
    };
    let separable = spectrum.map(|s| {
        is_separable(cm)
            .map(|v| v.separable)
            .unwrap_or(s.kappa_tilde_minus >= 0.5)
    });
    let report = CheckReport {
        version: VERSION,
        cm: cm_file(cm),
        physical: phys.physical,
        separable,
        spectrum,
        invariants: inv,
        uncertainty_det: uncertainty_determinant(&inv),
        standard_form: reduction.map(|r| r.form),
        rank_one_cross: reduction.map(|r| r.rank_one_cross),
    };
    if json {
        print_json(&report);
    } else {
        print_check_table(&report, phys.kappa_minus);
    }
    Ok(match separable {
        None => 2,
        Some(true) => 0,
        Some(false) => 3,
    })
}

fn print_check_table(r: &CheckReport, kappa_minus: f64) {
    let yes = |b: bool| if b { "yes" } else { "no" };
    println!("physical      {}", yes(r.physical));
    match (r.separable, &r.spectrum) {
        (Some(sep), Some(s)) => {
            println!("separable     {}", yes(sep));
            println!("kappa_+       {:.12}", s.kappa_plus);
            println!("kappa_-       {:.12}", s.kappa_minus);
            println!("kappa~_+      {:.12}", s.kappa_tilde_plus);
            println!("kappa~_-      {:.12}", s.kappa_tilde_minus);
        }
        _ => println!("kappa_-       {kappa_minus:.12} (needs ≥ 0.5)"),
    }
    let i = &r.invariants;
    println!("det V1        {:.12}", i.det_v1);
    println!("det V2        {:.12}", i.det_v2);
    println!("det C         {:.12}", i.det_c);
    println!("det V         {:.12}", i.det_v);
    println!("det(V+iΩ/2)   {:.12e}", r.uncertainty_det);
    if let Some(f) = r.standard_form {
        println!(
            "standard form b1 = {:.12}, b2 = {:.12}, c = {:.12}, d = {:.12}",
            f.b1, f.b2, f.c, f.d
        );
    }
    if r.rank_one_cross == Some(true) {
        println!("note          det C = 0 with C ≠ 0; d set to 0");
    }
}

/// Standard parameters of a symmetric input; `state` is absent when the
/// reduced d is positive (such states are always separable).
struct SymmetricInput {
    state: Option<SymmetricState>,
    form: StandardFormI,
    spectrum: SymplecticSpectrum,
}

fn symmetric_input(cm: &TwoModeCM) -> Result<SymmetricInput, CliError> {
    let inv = invariants(cm);
    let gap = (inv.det_v1 - inv.det_v2).abs();
    if gap >= 1e-9 {
        return Err(Error::NotSymmetric(gap).into());
    }
    let form = to_standard_form_i(cm)?.form;
    let spectrum = symplectic_spectrum(cm)?;
    let state = if form.d > 0.0 {
        None
    } else {
        Some(SymmetricState::from_cm(cm)?)
    };
    Ok(SymmetricInput { state, form, spectrum })
}

#[derive(Serialize)]
struct BuresVerify {
    f_numeric: f64,
    f_closed: f64,
    discrepancy: f64,
    e_b_numeric: f64,
    start_spread: f64,
}

#[derive(Serialize)]
struct BuresReport {
    version: &'static str,
    cm: CmFile,
    standard_form: StandardFormI,
    separable: bool,
    kappa_tilde_minus: f64,
    e_b: f64,
    f_max: f64,
    d_bures: f64,
    verify: Option<BuresVerify>,
}

pub fn bures(cm: &TwoModeCM, verify: bool) -> Result<u8, CliError> {
    let input = symmetric_input(cm)?;
    let kt = input.spectrum.kappa_tilde_minus;
    let res = match &input.state {
        Some(s) => bures_entanglement(s)?,
        None => bures_from_kappa(kt)?,
    };
    let separable = res.e_b == 0.0;
    let verify = match (&input.state, verify && !separable) {
        (Some(s), true) => {
            let opt = numeric_max_fidelity(s, SearchBudget::default())?;
            Some(BuresVerify {
                f_numeric: opt.f_star,
                f_closed: res.f_max,
                discrepancy: (opt.f_star - res.f_max).abs(),
                e_b_numeric: 1.0 - opt.f_star.sqrt(),
                start_spread: opt.spread,
            })
        }
        _ => None,
    };
    print_json(&BuresReport {
        version: VERSION,
        cm: cm_file(cm),
        standard_form: input.form,
        separable,
        kappa_tilde_minus: kt,
        e_b: res.e_b,
        f_max: res.f_max,
        d_bures: res.d_bures,
        verify,
    });
    Ok(0)
}

#[derive(Serialize)]
struct RelentVerify {
    e_s_grid: f64,
    discrepancy: f64,
}

#[derive(Serialize)]
struct RelentReport {
    version: &'static str,
    cm: CmFile,
    standard_form: StandardFormI,
    separable: bool,
    kappa_plus: f64,
    kappa_minus: f64,
    kappa_tilde_minus: f64,
    e_s: f64,
    x1_star: Option<f64>,
    x2_star: Option<f64>,
    q_s1: f64,
    q_s2: f64,
    s_n1: f64,
    s_n2: f64,
    ordering_violation: bool,
    verify: Option<RelentVerify>,
}

/// Two-stage zoomed grid over the threshold candidates (x1, x2).
fn grid_e_s(s: &SymmetricState, steps: usize) -> Result<f64, CliError> {
    let hi = 4.0 * s.kappa_plus() + 1.0;
    let (mut box1, mut box2) = ((0.5, hi), (0.5, hi));
    let mut best = f64::INFINITY;
    for _ in 0..2 {
        let h1 = (box1.1 - box1.0) / steps as f64;
        let h2 = (box2.1 - box2.0) / steps as f64;
        let mut arg = (box1.0, box2.0);
        for i in 1..=steps {
            let x1 = box1.0 + h1 * i as f64;
            for j in 1..=steps {
                let x2 = box2.0 + h2 * j as f64;
                let f = two_mode_objective(s, x1, x2)?;
                if f < best {
                    best = f;
                    arg = (x1, x2);
                }
            }
        }
        log::debug!("grid stage: best {best:.12} at {arg:?}");
        box1 = ((arg.0 - 2.0 * h1).max(0.5), arg.0 + 2.0 * h1);
        box2 = ((arg.1 - 2.0 * h2).max(0.5), arg.1 + 2.0 * h2);
    }
    Ok(best)
}

pub fn relent(cm: &TwoModeCM, verify: bool) -> Result<u8, CliError> {
    let input = symmetric_input(cm)?;
    let sp = input.spectrum;
    let mut report = RelentReport {
        version: VERSION,
        cm: cm_file(cm),
        standard_form: input.form,
        separable: true,
        kappa_plus: sp.kappa_plus,
        kappa_minus: sp.kappa_minus,
        kappa_tilde_minus: sp.kappa_tilde_minus,
        e_s: 0.0,
        x1_star: None,
        x2_star: None,
        q_s1: 0.0,
        q_s2: 0.0,
        s_n1: relent::entropy_of_nu(sp.kappa_plus),
        s_n2: relent::entropy_of_nu(sp.kappa_minus),
        ordering_violation: false,
        verify: None,
    };
    if let Some(s) = &input.state {
        let r = rel_ent_entanglement(s)?;
        report.separable = s.is_separable();
        report.e_s = r.e_s;
        if !report.separable {
            report.x1_star = Some(r.x1_star);
            report.x2_star = Some(r.x2_star);
        }
        report.q_s1 = r.q_s1;
        report.q_s2 = r.q_s2;
        report.ordering_violation = r.ordering_violation;
        if verify && !report.separable {
            let e_s_grid = grid_e_s(s, 1000)?;
            report.verify = Some(RelentVerify {
                e_s_grid,
                discrepancy: (e_s_grid - r.e_s).abs(),
            });
        }
    }
    print_json(&report);
    Ok(0)
}
