use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cwt::{cwt_row_ridge, MorletSpec};
use crate::error::{Error, Result};
use crate::ftm::{find_carrier_peak, ft_extract, FtParams, LobeRoi};
use crate::mask::dilate_mask;
use crate::phase::phase_diff;
use crate::types::{FrameMeta, Image, Mask, PhaseMap};
use crate::wfr::{ridge_phase, WfrParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Wfr,
    Ft,
    Cwt,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Wfr => "wfr",
            Method::Ft => "ft",
            Method::Cwt => "cwt",
        })
    }
}

/// A phase extraction method together with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "lowercase")]
pub enum Extractor {
    Wfr(WfrParams),
    Ft(FtParams),
    Cwt(MorletSpec),
}

impl Extractor {
    pub fn method(&self) -> Method {
        match self {
            Extractor::Wfr(_) => Method::Wfr,
            Extractor::Ft(_) => Method::Ft,
            Extractor::Cwt(_) => Method::Cwt,
        }
    }

    /// Fixes anything that depends on the data; for the Fourier method an
    /// unset ROI is centered on the reference frame's carrier peak.
    pub fn resolve(&self, reference: &Image) -> Result<Extractor> {
        match self {
            Extractor::Ft(p) if p.roi.is_none() => {
                let (xi0, eta0) = find_carrier_peak(reference, p.exclusion_radius)?;
                Ok(Extractor::Ft(FtParams {
                    roi: Some(LobeRoi::around(xi0, eta0)?),
                    ..*p
                }))
            }
            other => Ok(other.clone()),
        }
    }

    /// Wrapped carrier-inclusive phase of one frame.
    pub fn extract(&self, image: &Image) -> Result<PhaseMap> {
        match self {
            Extractor::Wfr(p) => Ok(ridge_phase(image, p)?.phase),
            Extractor::Ft(p) => {
                let roi = match p.roi {
                    Some(roi) => roi,
                    None => {
                        let (xi0, eta0) = find_carrier_peak(image, p.exclusion_radius)?;
                        LobeRoi::around(xi0, eta0)?
                    }
                };
                let mut phase = ft_extract(image, &roi)?;
                phase.invalidate_border(p.border);
                Ok(phase)
            }
            Extractor::Cwt(spec) => Ok(cwt_row_ridge(image, spec)?.phase),
        }
    }
}

#[derive(Debug, Clone)]
pub struct FrameDifference {
    pub meta: FrameMeta,
    pub difference: PhaseMap,
}

/// Per-frame wrapped difference maps against frame 0.
#[derive(Debug, Clone)]
pub struct SequenceResult {
    pub method: Method,
    /// The extractor as actually run, including any resolved ROI.
    pub extractor: Extractor,
    pub frames: Vec<FrameDifference>,
}

impl SequenceResult {
    pub fn difference(&self, frame: usize) -> &PhaseMap {
        &self.frames[frame].difference
    }
}

/// Extracts every frame, subtracts the frame-0 phase, and invalidates pixels
/// of `mask` dilated by `margin`.
///
/// `metas` defaults to sequential indices without temperature.
pub fn process_sequence(
    frames: &[Image],
    metas: Option<&[FrameMeta]>,
    extractor: &Extractor,
    mask: Option<&Mask>,
    margin: usize,
) -> Result<SequenceResult> {
    if frames.len() < 2 {
        return Err(Error::invalid(format!(
            "need at least 2 frames, got {}",
            frames.len()
        )));
    }
    let dims = frames[0].dims();
    for (index, f) in frames.iter().enumerate() {
        if f.dims() != dims {
            return Err(Error::Frame {
                index,
                source: Box::new(Error::DimensionMismatch {
                    expected: dims,
                    actual: f.dims(),
                }),
            });
        }
    }
    if let Some(m) = mask {
        if m.dims() != dims {
            return Err(Error::DimensionMismatch {
                expected: dims,
                actual: m.dims(),
            });
        }
    }
    let metas: Vec<FrameMeta> = match metas {
        Some(m) if m.len() != frames.len() => {
            return Err(Error::invalid(format!(
                "{} frame records for {} frames",
                m.len(),
                frames.len()
            )))
        }
        Some(m) => m.to_vec(),
        None => (0..frames.len())
            .map(|index| FrameMeta {
                index,
                temperature_k: None,
            })
            .collect(),
    };

    let tag = |index: usize| move |e: Error| Error::Frame {
        index,
        source: Box::new(e),
    };
    let extractor = extractor.resolve(&frames[0]).map_err(tag(0))?;
    let exclusion = mask.map(|m| dilate_mask(m, margin));

    let phases: Vec<PhaseMap> = frames
        .par_iter()
        .enumerate()
        .map(|(i, f)| extractor.extract(f).map_err(tag(i)))
        .collect::<Result<_>>()?;

    let reference = &phases[0];
    let frames = phases
        .iter()
        .zip(metas)
        .map(|(phase, meta)| {
            let mut difference = phase_diff(phase, reference)?;
            if let Some(ex) = &exclusion {
                difference.apply_mask(ex)?;
            }
            Ok(FrameDifference { meta, difference })
        })
        .collect::<Result<_>>()?;
    Ok(SequenceResult {
        method: extractor.method(),
        extractor,
        frames,
    })
}
