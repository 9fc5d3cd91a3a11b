use std::f64::consts::PI;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use hgbos::analysis::{
    contour_segments, export_segments_csv, line_profile, process_sequence, unwrap_rows, Extractor,
};
use hgbos::bench::{run_bench, BenchConfig};
use hgbos::cwt::MorletSpec;
use hgbos::ftm::{FtParams, LobeRoi, Taper};
use hgbos::io::{load_fgrid, load_image, load_pgm, save_fgrid, save_fgrid_image, save_pgm, write_series_csv, BitDepth};
use hgbos::parallel::{resolve_workers, with_workers};
use hgbos::synth::{ramped_fields, render_sequence, GridModel, NoiseSpec, PhaseField, Waveform};
use hgbos::wfr::{FreqGrid, WfrParams, WindowSpec};
use hgbos::{phase_diff, FrameMeta, Image, Mask};
use serde_json::json;

use crate::args::{
    BenchArgs, ContourArgs, DepthArg, DiffArgs, ExtractArgs, GridArgs, MethodArg, Preset,
    ProfileArgs, SynthArgs, TaperArg, WaveformArg, WindowArgs,
};
use crate::manifest;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Lib(#[from] hgbos::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Runtime(String),
}

type CliResult<T = ()> = Result<T, CliError>;

/// Files written so far; deleted on drop unless the run is committed.
struct Outputs {
    paths: Vec<PathBuf>,
    committed: bool,
}

impl Outputs {
    fn new() -> Self {
        Self {
            paths: Vec::new(),
            committed: false,
        }
    }

    fn track(&mut self, path: PathBuf) -> PathBuf {
        self.paths.push(path.clone());
        path
    }

    fn commit(mut self) {
        self.committed = true;
    }
}

impl Drop for Outputs {
    fn drop(&mut self) {
        if !self.committed {
            for p in &self.paths {
                let _ = fs::remove_file(p);
            }
        }
    }
}

fn window_spec(a: &WindowArgs) -> CliResult<WindowSpec> {
    Ok(match a.radius {
        Some(r) => WindowSpec::with_radius(a.sigma_x, a.sigma_y, r)?,
        None => WindowSpec::new(a.sigma_x, a.sigma_y)?,
    })
}

fn freq_grid(a: &GridArgs) -> CliResult<FreqGrid> {
    Ok(FreqGrid::new((a.wxl, a.wxi, a.wxh), (a.wyl, a.wyi, a.wyh))?)
}

fn require_file(path: &Path, what: &str) -> CliResult {
    if path.is_file() {
        Ok(())
    } else {
        Err(CliError::Usage(format!("{what} {} not found", path.display())))
    }
}

fn base_field(a: &SynthArgs, width: usize, height: usize) -> PhaseField {
    match a.preset {
        Preset::Zero => PhaseField::Zero,
        Preset::Ramp => PhaseField::Ramp {
            slope_x: a.slope_x,
            slope_y: a.slope_y,
        },
        Preset::Plume => PhaseField::GaussianPlume {
            amplitude: 1.0,
            center_x: a.center_x.unwrap_or(width as f64 / 2.0),
            center_y: a.center_y.unwrap_or(height as f64 / 2.0),
            width: a.plume_width,
        },
        Preset::BoundaryLayer => PhaseField::BoundaryLayer {
            amplitude: 1.0,
            wall_x: a.center_x.unwrap_or(width as f64 / 4.0),
            decay: a.decay,
        },
    }
}

pub fn synth(a: &SynthArgs) -> CliResult {
    let (width, height) = a.size.dims();
    if a.frames == 0 {
        return Err(CliError::Usage("--frames must be at least 1".into()));
    }
    if !a.amp_max.is_finite() {
        return Err(CliError::Usage("--amp-max must be finite".into()));
    }
    let model = GridModel {
        background: a.background,
        amp_x: a.amp_x,
        amp_y: a.amp_y,
        carrier_x: a.carrier_x,
        carrier_y: a.carrier_y,
        waveform: match a.waveform {
            WaveformArg::Cosine => Waveform::Cosine,
            WaveformArg::Square => Waveform::Square,
        },
    };
    model.validate()?;
    let base = base_field(a, width, height);
    base.validate()?;
    let noise = NoiseSpec::new(a.noise, a.seed)?;
    let metas = (0..a.frames)
        .map(|i| {
            FrameMeta::new(
                i,
                a.temperature_start.map(|t| t + a.temperature_step * i as f64),
            )
        })
        .collect::<Result<Vec<_>, _>>()?;
    let depth = match a.bit_depth {
        DepthArg::Eight => BitDepth::Eight,
        DepthArg::Sixteen => BitDepth::Sixteen,
    };

    let fields = ramped_fields(&base, a.frames, a.amp_max);
    let rendered = render_sequence(&model, &fields, &noise, width, height)?;

    fs::create_dir_all(&a.out)?;
    let mut outputs = Outputs::new();
    let mut list = String::new();
    let mut records = Vec::with_capacity(a.frames);
    for ((r, field), meta) in rendered.iter().zip(&fields).zip(&metas) {
        let i = meta.index;
        let pgm = format!("frame_{i:03}.pgm");
        let fgrid = format!("frame_{i:03}.fgrid");
        let truth = format!("truth_{i:03}.fgrid");
        save_pgm(&r.image, outputs.track(a.out.join(&pgm)), depth)?;
        save_fgrid_image(&r.image, outputs.track(a.out.join(&fgrid)))?;
        save_fgrid(&field.truth_map(width, height)?, outputs.track(a.out.join(&truth)))?;
        list.push_str(&fgrid);
        if let Some(t) = meta.temperature_k {
            list.push_str(&format!(" {t}"));
        }
        list.push('\n');
        records.push(json!({
            "meta": meta,
            "field": field,
            "clamped": r.clamped,
            "pgm": pgm,
            "fgrid": fgrid,
            "truth": truth,
        }));
    }
    fs::write(outputs.track(a.out.join("frames.txt")), list)?;
    manifest::append(
        &a.out.join("manifest.jsonl"),
        "synth",
        json!({
            "width": width,
            "height": height,
            "model": model,
            "base_field": base,
            "amp_max": a.amp_max,
            "noise": noise,
            "bit_depth": match depth { BitDepth::Eight => 8, BitDepth::Sixteen => 16 },
            "frames": records,
        }),
    )?;
    outputs.commit();
    println!("wrote {} frames to {}", a.frames, a.out.display());
    Ok(())
}

struct ListEntry {
    path: PathBuf,
    temperature_k: Option<f64>,
}

// One path per line, optionally followed by a temperature in kelvin.
// Relative paths are resolved against the list file's directory.
fn read_frame_list(list: &Path) -> CliResult<Vec<ListEntry>> {
    let text = fs::read_to_string(list)?;
    let dir = list.parent().unwrap_or(Path::new("."));
    let mut entries = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let path = PathBuf::from(parts.next().expect("non-empty line"));
        let temperature_k = parts
            .next()
            .map(|t| {
                t.parse::<f64>().map_err(|e| {
                    CliError::Usage(format!("{}:{}: bad temperature {t:?}: {e}", list.display(), n + 1))
                })
            })
            .transpose()?;
        if parts.next().is_some() {
            return Err(CliError::Usage(format!(
                "{}:{}: expected `path [temperature]`",
                list.display(),
                n + 1
            )));
        }
        let path = if path.is_absolute() { path } else { dir.join(path) };
        entries.push(ListEntry { path, temperature_k });
    }
    Ok(entries)
}

fn extractor(a: &ExtractArgs) -> CliResult<Extractor> {
    let window = window_spec(&a.window)?;
    let grid = freq_grid(&a.grid)?;
    let ex = match a.method {
        MethodArg::Wfr => {
            let p = WfrParams {
                window,
                grid,
                relative_threshold: a.relative_threshold,
                contrast_threshold: a.contrast_threshold,
            };
            p.validate()?;
            Extractor::Wfr(p)
        }
        MethodArg::Ft => {
            let roi = match (a.roi_xi, a.roi_eta) {
                (Some(xi0), Some(eta0)) => Some(LobeRoi::new(
                    xi0,
                    eta0,
                    a.roi_half_xi.unwrap_or(xi0 / 2.0),
                    a.roi_half_eta.unwrap_or(PI / 8.0),
                    match a.taper {
                        Some(TaperArg::RaisedCosine) => Taper::RaisedCosine,
                        _ => Taper::Hard,
                    },
                )?),
                _ => None,
            };
            if !(a.exclusion >= 0.0 && a.exclusion.is_finite()) {
                return Err(CliError::Usage("--exclusion must be >= 0".into()));
            }
            Extractor::Ft(FtParams {
                roi,
                exclusion_radius: a.exclusion,
                border: a.border,
            })
        }
        MethodArg::Cwt => {
            let mut spec = MorletSpec::from_frequencies(a.omega0, a.grid.wxl, a.grid.wxi, a.grid.wxh)?;
            spec.normalize_rows = a.normalize_rows;
            Extractor::Cwt(spec)
        }
    };
    Ok(ex)
}

pub fn extract(a: &ExtractArgs) -> CliResult {
    let extractor = extractor(a)?;
    require_file(&a.frames, "frame list")?;
    if let Some(m) = &a.mask {
        require_file(m, "mask")?;
    }
    if !(0.0..=1.0).contains(&a.mask_threshold) {
        return Err(CliError::Usage("--mask-threshold must lie in [0, 1]".into()));
    }
    let entries = read_frame_list(&a.frames)?;
    let mut frames: Vec<Image> = Vec::with_capacity(entries.len());
    let mut metas = Vec::with_capacity(entries.len());
    for (index, e) in entries.iter().enumerate() {
        require_file(&e.path, &format!("frame {index}"))?;
        let image = load_image(&e.path).map_err(|source| hgbos::Error::Frame {
            index,
            source: Box::new(source),
        })?;
        frames.push(image);
        metas.push(FrameMeta::new(index, e.temperature_k)?);
    }
    let mask = match &a.mask {
        Some(p) => Some(Mask::from_image(&load_pgm(p)?, a.mask_threshold)),
        None => None,
    };

    let workers = resolve_workers(a.workers.workers);
    let start = Instant::now();
    let result = with_workers(workers, || {
        process_sequence(&frames, Some(&metas), &extractor, mask.as_ref(), a.margin)
    })??;
    let elapsed = start.elapsed().as_secs_f64();

    fs::create_dir_all(&a.out)?;
    let mut outputs = Outputs::new();
    let mut records = Vec::with_capacity(result.frames.len());
    for (f, e) in result.frames.iter().zip(&entries) {
        let name = format!("diff_{:03}.fgrid", f.meta.index);
        save_fgrid(&f.difference, outputs.track(a.out.join(&name)))?;
        records.push(json!({
            "meta": f.meta,
            "input": e.path,
            "output": name,
            "valid": f.difference.valid_count(),
        }));
    }
    manifest::append(
        &a.out.join("manifest.jsonl"),
        "extract",
        json!({
            "method": result.method.to_string(),
            "extractor": result.extractor,
            "frame_list": a.frames,
            "mask": a.mask,
            "mask_threshold": a.mask_threshold,
            "margin": a.margin,
            "workers": workers,
            "elapsed_seconds": elapsed,
            "frames": records,
        }),
    )?;
    outputs.commit();
    println!(
        "{}: wrote {} difference maps to {} in {elapsed:.2} s",
        result.method,
        result.frames.len(),
        a.out.display()
    );
    Ok(())
}

pub fn diff(a: &DiffArgs) -> CliResult {
    require_file(&a.current, "phase map")?;
    require_file(&a.reference, "phase map")?;
    let d = phase_diff(&load_fgrid(&a.current)?, &load_fgrid(&a.reference)?)?;
    save_fgrid(&d, &a.out)?;
    manifest::append(
        &manifest::beside(&a.out),
        "diff",
        json!({ "current": a.current, "reference": a.reference, "output": a.out }),
    )?;
    Ok(())
}

pub fn profile(a: &ProfileArgs) -> CliResult {
    require_file(&a.input, "phase map")?;
    let mut map = load_fgrid(&a.input)?;
    if a.unwrap {
        map = unwrap_rows(&map);
    }
    let p = line_profile(&map, a.row)?;
    write_series_csv(&p.series(), &a.out)?;
    manifest::append(
        &manifest::beside(&a.out),
        "profile",
        json!({ "input": a.input, "row": a.row, "unwrap": a.unwrap, "output": a.out }),
    )?;
    Ok(())
}

pub fn contour(a: &ContourArgs) -> CliResult {
    require_file(&a.input, "phase map")?;
    let map = load_fgrid(&a.input)?;
    let segments = contour_segments(&map, &a.levels)?;
    fs::write(&a.out, export_segments_csv(&segments))?;
    manifest::append(
        &manifest::beside(&a.out),
        "contour",
        json!({ "input": a.input, "levels": a.levels, "segments": segments.len(), "output": a.out }),
    )?;
    Ok(())
}

pub fn bench(a: &BenchArgs) -> CliResult {
    let (width, height) = a.size.dims();
    let config = BenchConfig {
        width,
        height,
        window: window_spec(&a.window)?,
        grid: freq_grid(&a.grid)?,
        workers: a.workers.clone(),
        seed: a.seed,
    };
    let report = run_bench(&config)?;
    let text = serde_json::to_string_pretty(&json!({ "config": config, "report": report }))
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    match &a.out {
        Some(path) => {
            fs::write(path, &text)?;
            manifest::append(
                &manifest::beside(path),
                "bench",
                json!({ "config": config, "output": path }),
            )?;
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            writeln!(stdout, "{text}")?;
        }
    }
    if !report.identical {
        return Err(CliError::Runtime(
            "ridge output differs between worker counts".into(),
        ));
    }
    Ok(())
}
