use std::fs;
use std::path::Path;

use super::{DenoiseArgs, DistanceArgs, FlatnormArgs, FlatnormMethod, RunManifest, ShapeMethod, SweepArgs};
use crate::chainlp::{flat_norm_lp, LpConfig};
use crate::complex::format::{read_chain, write_chain};
use crate::complex::{BinarySet, Chain};
use crate::decomposition::Decomposition;
use crate::dualform::{complementary_slackness_report, dual_flat_norm, extract_x};
use crate::error::{Error, Result};
use crate::mincut::{l1tv_denoise, Connectivity, MincutConfig};
use crate::netpbm::Bitmap;
use crate::numfmt::sig9;
use crate::render::render_decomposition;
use crate::shapes::{lambda_sweep, shape_distance, Method, SweepInput};

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn read_bitmap(path: &Path) -> Result<Bitmap> {
    Bitmap::parse(&read_text(path)?).map_err(|e| in_file(path, e))
}

fn in_file(path: &Path, e: Error) -> Error {
    match e {
        Error::Parse { line, msg } => Error::Parse {
            line,
            msg: format!("{}: {msg}", path.display()),
        },
        other => other,
    }
}

fn shape_method(method: ShapeMethod, connectivity: Connectivity) -> Method {
    match method {
        ShapeMethod::Mincut => Method::MinCut(connectivity),
        ShapeMethod::Lp => Method::Lp,
    }
}

fn renderable(t: &Chain) -> bool {
    t.complex().dimension() == 2 && t.degree() == 1
}

pub(super) fn denoise(args: &DenoiseArgs) -> Result<String> {
    let mut m = RunManifest::resolve("denoise", &[args.image.clone()], vec![args.lambda], &args.out)?;
    m.connectivity = Some(args.connectivity.to_string());
    m.check_outputs(&["sigma.pbm", "decomposition.ppm", "report.txt", "manifest.txt"])?;
    let omega = read_bitmap(&m.inputs[0])?.to_set()?;
    let d = l1tv_denoise(&omega, &MincutConfig::new(args.lambda, args.connectivity))?;
    let sigma = d.sigma.as_ref().expect("min-cut decompositions carry sigma");
    m.write("sigma.pbm", &Bitmap::from_set(sigma)?.write())?;
    m.write("decomposition.ppm", &render_decomposition(&d, args.scale)?.write())?;
    let report = d.report();
    m.write("report.txt", &report)?;
    m.write("manifest.txt", &m.to_text())?;
    Ok(report)
}

pub(super) fn flatnorm(args: &FlatnormArgs) -> Result<String> {
    let mut m = RunManifest::resolve("flatnorm", &[args.chain.clone()], vec![args.lambda], &args.out)?;
    let method = match args.method {
        FlatnormMethod::Lp => "lp",
        FlatnormMethod::Dual => "dual",
        FlatnormMethod::Both => "both",
    };
    m.method = Some(method.into());
    m.tolerances = vec![
        ("gap_tolerance".into(), args.gap_tolerance),
        ("slackness_tolerance".into(), args.slackness_tolerance),
    ];
    let mut outputs = vec!["s.fc", "residual.fc", "report.txt", "manifest.txt"];
    if args.method != FlatnormMethod::Lp {
        outputs.extend(["phi.fc", "x.fc"]);
    }
    if args.method == FlatnormMethod::Both {
        outputs.push("slackness.txt");
    }
    m.check_outputs(&outputs)?;
    let t = read_chain(&read_text(&m.inputs[0])?).map_err(|e| in_file(&m.inputs[0], e))?;

    let lp = || {
        let config = LpConfig {
            probe_uniqueness: args.probe_uniqueness,
            ..LpConfig::new(args.lambda).with_gap_tolerance(args.gap_tolerance)
        };
        flat_norm_lp(&t, &config)
    };
    let write_primal = |d: &Decomposition| -> Result<()> {
        m.write("s.fc", &write_chain(&d.s_chain)?)?;
        m.write("residual.fc", &write_chain(&d.t_minus_ds)?)
    };

    let report = match args.method {
        FlatnormMethod::Lp => {
            let d = lp()?;
            write_primal(&d)?;
            d.report()
        }
        FlatnormMethod::Dual | FlatnormMethod::Both => {
            let dual = dual_flat_norm(&t, args.lambda, args.gap_tolerance)?;
            let primal = match args.method {
                FlatnormMethod::Both => lp()?,
                _ => dual.decomposition(&t)?,
            };
            write_primal(&primal)?;
            let x = extract_x(&dual.phi, args.lambda, args.slackness_tolerance)?;
            m.write("phi.fc", &write_chain(&dual.phi.to_chain())?)?;
            m.write("x.fc", &write_chain(&x)?)?;
            let spt = primal.s_chain.support();
            let x_contains_support = spt.iter().all(|&f| x.get(f) != 0.0);
            let mut report = primal.report();
            report.push_str(&format!(
                "dual_value={}\nx_cells={}\nx_contains_support={}\nx_exceeds_support={}\n",
                sig9(dual.value),
                x.len(),
                x_contains_support,
                x_contains_support && x.len() > spt.len()
            ));
            if args.method == FlatnormMethod::Both {
                let slack = complementary_slackness_report(&primal, &dual.phi, args.slackness_tolerance)?;
                let rel = (primal.value - dual.value).abs() / primal.value.abs().max(1.0);
                report.push_str(&format!(
                    "primal_dual_gap={}\nslackness_passed={}\n",
                    sig9(rel),
                    slack.passed()
                ));
                m.write("slackness.txt", &slack.report())?;
            }
            report
        }
    };
    m.write("report.txt", &report)?;
    m.write("manifest.txt", &m.to_text())?;
    Ok(report)
}

pub(super) fn distance(args: &DistanceArgs) -> Result<String> {
    let mut m = RunManifest::resolve(
        "distance",
        &[args.a.clone(), args.b.clone()],
        vec![args.lambda],
        &args.out,
    )?;
    m.method = Some(shape_method(args.method, args.connectivity).name().into());
    if args.method == ShapeMethod::Mincut {
        m.connectivity = Some(args.connectivity.to_string());
    }
    m.check_outputs(&["s.fc", "residual.fc", "decomposition.ppm", "report.txt", "manifest.txt"])?;
    let a = read_bitmap(&m.inputs[0])?.to_set()?;
    let b = read_bitmap(&m.inputs[1])?.to_set_on(a.complex())?;
    let d = shape_distance(&a, &b, args.lambda, shape_method(args.method, args.connectivity))?;
    m.write("s.fc", &write_chain(&d.s_chain)?)?;
    m.write("residual.fc", &write_chain(&d.t_minus_ds)?)?;
    m.write("decomposition.ppm", &render_decomposition(&d, args.scale)?.write())?;
    let report = format!("distance={}\n{}", sig9(d.value), d.report());
    m.write("report.txt", &report)?;
    m.write("manifest.txt", &m.to_text())?;
    Ok(report)
}

enum Loaded {
    Set(BinarySet),
    Chain(Chain),
}

pub(super) fn sweep(args: &SweepArgs) -> Result<String> {
    let mut m = RunManifest::resolve("sweep", &[args.input.clone()], args.lambdas.clone(), &args.out)?;
    let method = shape_method(args.method, args.connectivity);
    m.method = Some(method.name().into());
    if args.method == ShapeMethod::Mincut {
        m.connectivity = Some(args.connectivity.to_string());
    }
    let renders: Vec<String> = (0..args.lambdas.len()).map(|i| format!("lambda_{i:03}.ppm")).collect();
    let mut outputs = vec!["signature.csv", "report.txt", "manifest.txt"];
    outputs.extend(renders.iter().map(String::as_str));
    m.check_outputs(&outputs)?;

    let text = read_text(&m.inputs[0])?;
    let loaded = if text.trim_start().starts_with("P1") {
        Loaded::Set(Bitmap::parse(&text).map_err(|e| in_file(&m.inputs[0], e))?.to_set()?)
    } else if text.starts_with("FLATCHAIN") {
        Loaded::Chain(read_chain(&text).map_err(|e| in_file(&m.inputs[0], e))?)
    } else {
        return Err(Error::parse(1, format!("{}: neither a plain PBM nor a FLATCHAIN file", m.inputs[0].display())));
    };
    let input = match &loaded {
        Loaded::Set(s) => SweepInput::Set(s),
        Loaded::Chain(c) => SweepInput::Chain(c),
    };
    let sig = lambda_sweep(input, &args.lambdas, method)?;
    m.write("signature.csv", &sig.to_csv())?;
    for (d, name) in sig.decompositions.iter().zip(&renders) {
        if renderable(&d.input) {
            m.write(name, &render_decomposition(d, args.scale)?.write())?;
        }
    }
    let report = format!(
        "rows={}\nmonotone={}\nconcave={}\nmass_s_nonincreasing={}\n",
        sig.entries.len(),
        sig.is_monotone(1e-9),
        sig.is_concave(1e-9),
        sig.mass_s_nonincreasing(1e-9)
    );
    m.write("report.txt", &report)?;
    m.write("manifest.txt", &m.to_text())?;
    Ok(report)
}
