use std::fmt::Write as _;
use std::path::Path;

use noat_core::bits::parse_bits;
use noat_core::criterion::{funny_word_search, theta_symmetry_check, FunnyWord, LambdaFamily};
use noat_core::gaussian::{
    cocycle_correlation_table, gnoat_constant, gnoat_constant_check, gnoat_constant_check_at,
    orthant_mc, Fold, GaussianSpec, Quadrant,
};
use noat_core::measure::{
    arcsine_fourth_transform, arcsine_transform, default_grid, density_on_grid, dirac_table,
    geometric_table, l1_tail, lebesgue_table, power_subsample, read_measure, riesz_product,
    sqrt_template, to_json, PsdPolicy,
};
use noat_core::sbh::{certify, CertifyParams, HeuristicParams, SbhReport, Verdict};
use noat_core::systems::{
    empirical_correlation, empirical_correlation_batch, nil_rotation_correlation,
    rotation_ac_cocycle_correlation, rudin_shapiro_signs, sample_names, table_rows,
    write_correlation_csv, BiasedSource, CoinSource, ConstantSource, CorrelationRow, DistalSource,
    Method, NameSource, NilSource, OdometerCocycle, OdometerSource, RotationCocycleSource,
    RudinShapiroSource,
};
use noat_core::{FourierTable, LabError, Result};
use num_complex::Complex64;
use serde::Serialize;

use crate::{
    CertifyArgs, Cmd, CocycleArgs, ConstantsArgs, FunnyArgs, GaussianCmd, Global, MeasureArgs,
    MeasureKind, OrthantArgs, QuadrantArg, Sink, SourceArgs, SourceKind, SystemArgs,
};

pub fn run(cmd: &Cmd, global: &Global, sink: &Sink) -> Result<u8> {
    match cmd {
        Cmd::Measure(a) => measure(a, sink),
        Cmd::Certify(a) => certify_cmd(a, global.seed, sink),
        Cmd::System(a) => system(a, global.seed, sink),
        Cmd::Gaussian(GaussianCmd::Orthant(a)) => orthant(a, global.seed, sink),
        Cmd::Gaussian(GaussianCmd::Constants(a)) => constants(a, sink),
        Cmd::Gaussian(GaussianCmd::Cocycle(a)) => cocycle(a, sink),
        Cmd::Funny(a) => funny(a, global.seed, sink),
    }
}

fn bad(msg: impl Into<String>) -> LabError {
    LabError::InvalidArgument(msg.into())
}

fn json_line<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string(v)? + "\n")
}

fn load(path: &Path, skip_psd: bool) -> Result<FourierTable> {
    let policy = if skip_psd {
        PsdPolicy::Skip
    } else {
        PsdPolicy::Enforce
    };
    read_measure(path, policy)
}

fn measure(a: &MeasureArgs, sink: &Sink) -> Result<u8> {
    let input = || -> Result<FourierTable> {
        let p = a
            .input
            .as_deref()
            .ok_or_else(|| bad(format!("{:?} needs --in", a.kind)))?;
        load(p, a.skip_psd)
    };
    let t = match a.kind {
        MeasureKind::Lebesgue => lebesgue_table(a.n),
        MeasureKind::Dirac => dirac_table(a.n),
        MeasureKind::Geometric => {
            geometric_table(a.rho.ok_or_else(|| bad("geometric needs --rho"))?, a.n)?
        }
        MeasureKind::Riesz => riesz_product(&a.a, &a.freq, a.n)?,
        MeasureKind::Sqrt => sqrt_template(a.c.unwrap_or_else(gnoat_constant), a.n)?,
        MeasureKind::Arcsine => arcsine_transform(&input()?)?,
        MeasureKind::Arcsine4 => arcsine_fourth_transform(&input()?)?,
        MeasureKind::Subsample => {
            power_subsample(&input()?, a.m.ok_or_else(|| bad("subsample needs --m"))?)?
        }
    };
    if let Some(path) = &a.density_csv {
        let grid = a.grid.unwrap_or_else(|| default_grid(&t));
        let values = density_on_grid(&t, grid)?;
        let mut csv = String::from("theta,density\n");
        for (j, v) in values.iter().enumerate() {
            writeln!(csv, "{:.16e},{:.16e}", j as f64 / grid as f64, v).expect("write to string");
        }
        std::fs::write(path, csv)?;
    }
    eprintln!(
        "{}: half width {}, l1 tail {:.6}",
        t.label(),
        t.half_width(),
        l1_tail(&t)
    );
    sink.emit((to_json(&t) + "\n").as_bytes())?;
    Ok(0)
}

fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::CertifiedSbh => 0,
        Verdict::CertifiedNotSbh => 3,
        Verdict::Undecided => 4,
    }
}

fn parse_range(s: &str) -> Result<(usize, usize)> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| bad(format!("expected A..B, got `{s}`")))?;
    let lo: usize = lo
        .trim()
        .parse()
        .map_err(|_| bad(format!("bad range start in `{s}`")))?;
    let hi: usize = hi
        .trim()
        .trim_start_matches('=')
        .parse()
        .map_err(|_| bad(format!("bad range end in `{s}`")))?;
    if lo == 0 || hi < lo {
        return Err(bad(format!("need 1 <= A <= B, got `{s}`")));
    }
    Ok((lo, hi))
}

#[derive(Serialize)]
struct ScanRow<'a> {
    m: usize,
    report: &'a SbhReport,
}

#[derive(Serialize)]
struct ScanSummary {
    scan: (usize, usize),
    first_certified: Option<usize>,
}

fn certify_cmd(a: &CertifyArgs, seed: u64, sink: &Sink) -> Result<u8> {
    let t = load(&a.input, a.skip_psd)?;
    let params = CertifyParams {
        exhaustive: (!a.no_exhaustive).then_some((a.k, a.window)),
        heuristic: (!a.no_heuristic).then_some(HeuristicParams {
            k: a.heur_k,
            window: a.heur_window,
            budget: a.budget,
            seed,
        }),
        grid_size: a.grid,
    };
    let Some(scan) = &a.subsample_scan else {
        let r = certify(&t, &params)?;
        eprintln!("{}: {:?} ({})", r.label, r.verdict, r.note);
        sink.emit(json_line(&r)?.as_bytes())?;
        return Ok(verdict_code(r.verdict));
    };
    let (lo, hi) = parse_range(scan)?;
    let mut payload = String::new();
    let mut first = None;
    let mut last = Verdict::Undecided;
    for m in lo..=hi {
        let s = power_subsample(&t, m)?;
        let r = certify(&s, &params)?;
        if r.verdict == Verdict::CertifiedSbh && first.is_none() {
            first = Some(m);
        }
        last = r.verdict;
        payload += &json_line(&ScanRow { m, report: &r })?;
    }
    payload += &json_line(&ScanSummary {
        scan: (lo, hi),
        first_certified: first,
    })?;
    match first {
        Some(m) => eprintln!("first power certified SBH: m = {m}"),
        None => eprintln!("no power in {lo}..{hi} certified SBH"),
    }
    sink.emit(payload.as_bytes())?;
    Ok(if first.is_some() {
        0
    } else {
        verdict_code(last)
    })
}

fn build_source(kind: SourceKind, s: &SourceArgs) -> Result<Box<dyn NameSource>> {
    Ok(match kind {
        SourceKind::RudinShapiro => Box::new(RudinShapiroSource),
        SourceKind::Nil => Box::new(NilSource::new(s.alpha, s.beta, s.gamma)?),
        SourceKind::Distal => Box::new(DistalSource::new(s.alpha, s.m_scale)?),
        SourceKind::Rotation => Box::new(RotationCocycleSource::new(s.alpha, s.delta)?),
        SourceKind::Odometer => {
            let phi = match &s.table {
                Some(bits) => OdometerCocycle::new(parse_bits(bits)?)?,
                None => OdometerCocycle::first_digit(),
            };
            Box::new(OdometerSource::new(phi))
        }
        SourceKind::Coin => Box::new(CoinSource),
        SourceKind::Constant => Box::new(ConstantSource),
        SourceKind::Biased => Box::new(BiasedSource::new(s.p0)?),
    })
}

fn exact_row(n: i64, value: f64) -> CorrelationRow {
    CorrelationRow {
        n,
        value: Complex64::new(value, 0.0),
        method: Method::Exact,
        error_bar: 0.0,
    }
}

fn system(a: &SystemArgs, seed: u64, sink: &Sink) -> Result<u8> {
    let lags: Vec<i64> = match a.lag {
        Some(n) => vec![n],
        None => (0..=a.nmax as i64).collect(),
    };
    let reach = lags
        .iter()
        .map(|n| n.unsigned_abs() as usize)
        .max()
        .unwrap_or(0);
    let src = build_source(a.kind, &a.src)?;

    if let Some(path) = &a.names_out {
        let length = a.length.unwrap_or(4 * reach.max(1));
        let batch = sample_names(src.as_ref(), a.count, length, seed);
        let mut buf = Vec::new();
        batch.write_to(&mut buf)?;
        std::fs::write(path, buf)?;
        eprintln!(
            "wrote {} names of length {length} to {}",
            a.count,
            path.display()
        );
    }

    let rows: Vec<CorrelationRow> = if let Some(count) = a.empirical {
        let length = a.length.unwrap_or(4 * reach.max(1));
        let batch = sample_names(src.as_ref(), count, length, seed);
        let t = empirical_correlation_batch(&batch, reach)?;
        let all = table_rows(&t, Method::Empirical);
        lags.iter()
            .map(|&n| CorrelationRow {
                error_bar: if n == 0 {
                    0.0
                } else {
                    1.0 / (count as f64).sqrt()
                },
                ..all[n.unsigned_abs() as usize]
            })
            .collect()
    } else if a.kind == SourceKind::RudinShapiro {
        let t = empirical_correlation(&rudin_shapiro_signs(a.l), reach)?;
        let all = table_rows(&t, Method::Empirical);
        lags.iter()
            .map(|&n| {
                let m = n.unsigned_abs() as usize;
                CorrelationRow {
                    error_bar: if m == 0 {
                        0.0
                    } else {
                        1.0 / ((a.l - m) as f64).sqrt()
                    },
                    ..all[m]
                }
            })
            .collect()
    } else {
        lags.iter()
            .map(|&n| -> Result<CorrelationRow> {
                if n == 0 {
                    return Ok(exact_row(0, 1.0));
                }
                match a.kind {
                    SourceKind::Nil => {
                        let c =
                            nil_rotation_correlation(a.src.alpha, a.src.beta, a.src.gamma, n, a.m)?;
                        Ok(CorrelationRow {
                            n,
                            value: c.value,
                            method: Method::Series,
                            error_bar: c.error_bar,
                        })
                    }
                    SourceKind::Rotation if a.src.delta > 0.0 => {
                        let c = rotation_ac_cocycle_correlation(
                            a.src.alpha,
                            a.src.delta,
                            a.delta0,
                            n,
                            a.m,
                            a.quad_points,
                        )?;
                        Ok(CorrelationRow {
                            n,
                            value: Complex64::new(c.value, 0.0),
                            method: Method::Quadrature,
                            error_bar: c.error_bar,
                        })
                    }
                    _ => {
                        let v = src.exact_correlation(n).ok_or_else(|| {
                            bad(format!("no exact correlation for {} at n = {n}", src.id()))
                        })?;
                        Ok(exact_row(n, v))
                    }
                }
            })
            .collect::<Result<_>>()?
    };
    let mut buf = Vec::new();
    write_correlation_csv(&mut buf, &rows)?;
    eprintln!("{}: {} rows", src.id(), rows.len());
    sink.emit(&buf)?;
    Ok(0)
}

fn load_spec(path: &Path) -> Result<GaussianSpec> {
    GaussianSpec::from_table(&read_measure(path, PsdPolicy::Enforce)?)
}

fn orthant(a: &OrthantArgs, seed: u64, sink: &Sink) -> Result<u8> {
    let spec = match (&a.r, &a.spec) {
        (Some(r), None) => GaussianSpec::lag_one(*r)?,
        (None, Some(p)) => load_spec(p)?,
        _ => return Err(bad("orthant needs exactly one of --r and --spec")),
    };
    let fold = match a.fold {
        1 => Fold::One,
        2 => Fold::Two,
        _ => Fold::Four,
    };
    let quadrant = match a.quadrant {
        QuadrantArg::PosPos => Quadrant::PosPos,
        QuadrantArg::NegNeg => Quadrant::NegNeg,
    };
    let r = orthant_mc(&spec, a.lag, fold, quadrant, a.samples, seed)?;
    eprintln!(
        "estimate {:.6} ± {:.6}, closed form {:.6}, z = {:.2}",
        r.estimate, r.stderr, r.formula_value, r.z_score
    );
    sink.emit(json_line(&r)?.as_bytes())?;
    Ok(0)
}

fn constants(a: &ConstantsArgs, sink: &Sink) -> Result<u8> {
    let r = match a.c {
        Some(c) => gnoat_constant_check_at(c)?,
        None => gnoat_constant_check()?,
    };
    eprintln!(
        "c = {:.6}: chain margin {:.3e}, template margin {:.3e}, {:?}",
        r.c, r.chain_margin, r.template_margin, r.template_verdict
    );
    sink.emit(json_line(&r)?.as_bytes())?;
    Ok(0)
}

fn cocycle(a: &CocycleArgs, sink: &Sink) -> Result<u8> {
    let spec = load_spec(&a.spec)?;
    let t = cocycle_correlation_table(&spec, a.m, a.nmax)?;
    if let Some(path) = &a.csv {
        let rows: Vec<CorrelationRow> = table_rows(&t, Method::Series)
            .into_iter()
            .map(|r| CorrelationRow {
                error_bar: if r.n == 0 { 0.0 } else { t.tail_bound() },
                ..r
            })
            .collect();
        let mut buf = Vec::new();
        write_correlation_csv(&mut buf, &rows)?;
        std::fs::write(path, buf)?;
    }
    eprintln!(
        "cocycle table: half width {}, l1 tail {:.3e}",
        t.half_width(),
        l1_tail(&t)
    );
    sink.emit((to_json(&t) + "\n").as_bytes())?;
    Ok(0)
}

#[derive(Serialize)]
struct SymmetryLine<'a> {
    symmetry: &'a noat_core::criterion::SymmetryReport,
}

fn funny(a: &FunnyArgs, seed: u64, sink: &Sink) -> Result<u8> {
    let src = build_source(a.system, &a.src)?;
    let family = LambdaFamily {
        k: a.k,
        horizon: a.horizon.unwrap_or(4 * a.k),
        offsets: a.offsets,
        random_subsets: a.random_subsets,
    };
    let report = funny_word_search(src.as_ref(), &family, a.eps, a.samples, seed)?;
    let mut buf = Vec::new();
    report.write_jsonl(&mut buf)?;
    let s = &report.summary;
    if a.symmetry {
        let w = FunnyWord::new(s.best.lambda.clone(), s.best.word.clone())?;
        let sym = theta_symmetry_check(src.as_ref(), &w, a.samples, seed)?;
        buf.extend(json_line(&SymmetryLine { symmetry: &sym })?.into_bytes());
    }
    eprintln!(
        "{}: {} candidates, best |Lambda| mu = {:.4} (bound {:.4}), {} violation(s){}",
        s.source,
        s.candidates,
        s.best.k_times_mass,
        s.bound,
        s.violations,
        if s.violations > 0 { " FLAGGED" } else { "" }
    );
    sink.emit(&buf)?;
    Ok(0)
}
