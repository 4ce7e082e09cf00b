//! Per-image descriptor computation and the CSV feature cache.
//!
//! The cache is a plain CSV file headed by two comment lines (format
//! version and the config hash). Rows are keyed by root-relative path plus
//! a content hash, so re-running extraction skips everything already
//! computed and rewrites nothing when the corpus is unchanged.

use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use ndarray::Array2;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use super::{with_thread_budget, CorpusManifest, PipelineConfig};
use crate::descriptor::{assemble_descriptor, compress_channel, dct2, n_bins, DescriptorVector};
use crate::error::{Error, Result};
use crate::learn::Dataset;
use crate::preproc::{
    gaussian_kernel, hsv_stats, lowpass, rgb_to_hsv, rgb_to_ycbcr, ImagePlanes,
};
use crate::trace::{trace_transform, Channel};

const CACHE_MAGIC: &str = "# ditec feature cache v1";

/// One cached descriptor row.
#[derive(Debug, Clone, PartialEq)]
pub struct CacheRow {
    pub image: String,
    pub content_hash: String,
    pub label: String,
    pub values: Vec<f64>,
}

/// A parsed feature cache.
#[derive(Debug, Clone)]
pub struct FeatureCache {
    pub config_hash: String,
    pub attribute_names: Vec<String>,
    pub rows: Vec<CacheRow>,
}

/// What one extraction run did.
#[derive(Debug, Clone, Default)]
pub struct ExtractSummary {
    pub computed: usize,
    pub reused: usize,
    /// Per-image failure messages (non-fatal unless strict).
    pub failures: Vec<String>,
    /// Whether the cache file was rewritten.
    pub wrote: bool,
}

/// Column names of the descriptor under `config`, in cache order. The DC
/// pair of each channel holds HSV statistics and is named for them.
pub fn attribute_names(config: &PipelineConfig) -> Vec<String> {
    let substituted = [
        ("Y", "hsv_v_mu", "hsv_v_sigma"),
        ("Cb", "hsv_h_mu", "hsv_h_sigma"),
        ("Cr", "hsv_s_mu", "hsv_s_sigma"),
    ];
    let mut names = Vec::new();
    for (c, (prefix, dc_mu, dc_sigma)) in substituted.iter().enumerate() {
        let kept = config.keep[c];
        if kept == 0 {
            continue;
        }
        names.push(dc_mu.to_string());
        names.push(dc_sigma.to_string());
        for pair in 1..kept / 2 {
            names.push(format!("{prefix}_b{pair:03}_mu"));
            names.push(format!("{prefix}_b{pair:03}_k"));
        }
    }
    names
}

/// Full descriptor of one decoded RGB image: YCbCr conversion, low-pass,
/// per-channel trace transform, DCT, (μ, k) compression, HSV substitution,
/// truncation.
pub fn compute_descriptor(
    rgb: &ImagePlanes,
    config: &PipelineConfig,
) -> Result<DescriptorVector> {
    let bins = n_bins(config.trace.n_phi(), config.trace.n_rho());
    for kept in config.keep {
        if kept > 2 * bins {
            return Err(Error::contract(format!(
                "keep count {kept} exceeds the {} values per channel",
                2 * bins
            )));
        }
    }
    let kernel = gaussian_kernel(config.kernel_size, config.kernel_sigma)?;
    let filtered = lowpass(&rgb_to_ycbcr(rgb)?, &kernel)?;
    let mut channels: [Vec<f64>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for (idx, channel) in Channel::ALL.into_iter().enumerate() {
        let sino = trace_transform(filtered.plane(idx), &config.trace, channel);
        channels[idx] = compress_channel(&dct2(&sino.values));
    }
    let hsv = hsv_stats(&rgb_to_hsv(rgb)?)?;
    assemble_descriptor(&channels, &hsv, config.keep)
}

fn file_sha256(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path)?;
    let digest = Sha256::digest(&bytes);
    Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
}

fn decode_rgb(path: &Path) -> Result<ImagePlanes> {
    let decoded = image::open(path)
        .map_err(|e| Error::data(format!("decode `{}`: {e}", path.display())))?
        .to_rgb8();
    ImagePlanes::from_rgb8(
        decoded.width() as usize,
        decoded.height() as usize,
        decoded.as_raw(),
    )
}

/// Writes the cache file: two comment lines, a header row, then one row per
/// image in manifest order.
fn write_cache(
    path: &Path,
    config_hash: &str,
    names: &[String],
    rows: &[CacheRow],
) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "{CACHE_MAGIC}")?;
    writeln!(out, "# config_hash = {config_hash}")?;
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["image".to_string(), "sha256".into(), "label".into()];
    header.extend(names.iter().cloned());
    w.write_record(&header)
        .map_err(|e| Error::data(format!("csv: {e}")))?;
    for row in rows {
        let mut record = vec![row.image.clone(), row.content_hash.clone(), row.label.clone()];
        record.extend(row.values.iter().map(|v| v.to_string()));
        w.write_record(&record)
            .map_err(|e| Error::data(format!("csv: {e}")))?;
    }
    w.flush()?;
    Ok(())
}

/// Parses a cache file written by [`extract_features`].
pub fn read_cache(path: &Path) -> Result<FeatureCache> {
    let file = std::fs::File::open(path)
        .map_err(|e| Error::data(format!("open cache `{}`: {e}", path.display())))?;
    let mut reader = BufReader::new(file);
    let mut magic = String::new();
    reader.read_line(&mut magic)?;
    if magic.trim_end() != CACHE_MAGIC {
        return Err(Error::data(format!(
            "`{}` is not a feature cache",
            path.display()
        )));
    }
    let mut hash_line = String::new();
    reader.read_line(&mut hash_line)?;
    let config_hash = hash_line
        .trim_end()
        .strip_prefix("# config_hash = ")
        .ok_or_else(|| Error::data("cache is missing its config hash"))?
        .to_string();
    parse_cache_body(reader, config_hash)
}

fn parse_cache_body<R: Read>(reader: R, config_hash: String) -> Result<FeatureCache> {
    let mut csv_reader = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let attribute_names: Vec<String> = csv_reader
        .headers()
        .map_err(|e| Error::data(format!("cache header: {e}")))?
        .iter()
        .skip(3)
        .map(|s| s.to_string())
        .collect();
    let mut rows = Vec::new();
    for record in csv_reader.records() {
        let record = record.map_err(|e| Error::data(format!("cache row: {e}")))?;
        if record.len() != attribute_names.len() + 3 {
            return Err(Error::data("cache row width mismatch"));
        }
        let values = record
            .iter()
            .skip(3)
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|_| Error::data(format!("bad value `{f}` in cache")))
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(CacheRow {
            image: record[0].to_string(),
            content_hash: record[1].to_string(),
            label: record[2].to_string(),
            values,
        });
    }
    Ok(FeatureCache {
        config_hash,
        attribute_names,
        rows,
    })
}

/// Extracts descriptors for every manifest image into the cache at
/// `config.cache_path`. Rows already cached (same path and content hash)
/// are reused; the file is rewritten only when something changed. A cache
/// built under a different feature configuration is fatal.
pub fn extract_features(
    manifest: &CorpusManifest,
    config: &PipelineConfig,
    strict: bool,
) -> Result<ExtractSummary> {
    let config_hash = config.feature_hash();
    let names = attribute_names(config);
    let cache_path = &config.cache_path;

    let existing: Vec<CacheRow> = if cache_path.exists() {
        let cache = read_cache(cache_path)?;
        if cache.config_hash != config_hash {
            return Err(Error::data(format!(
                "cache `{}` was built with config hash {} but the current config hashes to {}; \
                 delete the cache or point --cache elsewhere, then re-extract",
                cache_path.display(),
                cache.config_hash,
                config_hash
            )));
        }
        cache.rows
    } else {
        Vec::new()
    };

    let mut summary = ExtractSummary::default();
    // (path, hash) -> row index for reuse lookups.
    let index: std::collections::HashMap<(String, String), usize> = existing
        .iter()
        .enumerate()
        .map(|(i, r)| ((r.image.clone(), r.content_hash.clone()), i))
        .collect();

    struct Job {
        slot: usize,
        image: String,
        label: String,
        hash: String,
    }
    let mut rows: Vec<Option<CacheRow>> = vec![None; manifest.entries.len()];
    let mut jobs = Vec::new();
    for (slot, entry) in manifest.entries.iter().enumerate() {
        let image = entry.path.to_string_lossy().into_owned();
        let full = manifest.root.join(&entry.path);
        let hash = match file_sha256(&full) {
            Ok(h) => h,
            Err(err) => {
                let msg = format!("`{image}`: {err}");
                if strict {
                    return Err(Error::data(msg));
                }
                summary.failures.push(msg);
                continue;
            }
        };
        if let Some(&i) = index.get(&(image.clone(), hash.clone())) {
            let mut row = existing[i].clone();
            row.label = entry.class.clone();
            rows[slot] = Some(row);
            summary.reused += 1;
        } else {
            jobs.push(Job {
                slot,
                image,
                label: entry.class.clone(),
                hash,
            });
        }
    }

    let computed: Vec<(usize, Result<CacheRow>)> = with_thread_budget(config.threads, || {
        jobs.par_iter()
            .map(|job| {
                let result = decode_rgb(&manifest.root.join(&job.image)).and_then(|rgb| {
                    let descriptor = compute_descriptor(&rgb, config)?;
                    Ok(CacheRow {
                        image: job.image.clone(),
                        content_hash: job.hash.clone(),
                        label: job.label.clone(),
                        values: descriptor.values,
                    })
                });
                (job.slot, result)
            })
            .collect()
    });
    for (slot, result) in computed {
        match result {
            Ok(row) => {
                rows[slot] = Some(row);
                summary.computed += 1;
            }
            Err(err) => {
                let msg = err.to_string();
                if strict {
                    return Err(Error::data(msg));
                }
                summary.failures.push(msg);
            }
        }
    }

    let final_rows: Vec<CacheRow> = rows.into_iter().flatten().collect();
    if final_rows.is_empty() {
        return Err(Error::data("no image produced a descriptor"));
    }
    let unchanged = summary.computed == 0
        && cache_path.exists()
        && final_rows.len() == existing.len()
        && final_rows == existing;
    if !unchanged {
        write_cache(cache_path, &config_hash, &names, &final_rows)?;
        summary.wrote = true;
    }
    Ok(summary)
}

/// Loads a cache into a labeled dataset: class names are the sorted unique
/// labels, features keep cache column order.
pub fn load_dataset(cache: &FeatureCache) -> Result<Dataset> {
    if cache.rows.is_empty() {
        return Err(Error::data("feature cache is empty"));
    }
    let mut class_names: Vec<String> = cache.rows.iter().map(|r| r.label.clone()).collect();
    class_names.sort();
    class_names.dedup();
    let d = cache.attribute_names.len();
    let mut features = Array2::zeros((cache.rows.len(), d));
    let mut labels = Vec::with_capacity(cache.rows.len());
    for (i, row) in cache.rows.iter().enumerate() {
        if row.values.len() != d {
            return Err(Error::data("cache row width mismatch"));
        }
        for (j, v) in row.values.iter().enumerate() {
            features[[i, j]] = *v;
        }
        labels.push(
            class_names
                .binary_search(&row.label)
                .expect("label in class list"),
        );
    }
    Dataset::new(
        features,
        labels,
        class_names,
        cache.attribute_names.clone(),
    )
}
