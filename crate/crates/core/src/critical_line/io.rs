//! Zero tables and the zero-set cache.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use super::zeros::ZeroSearch;
use super::{Provenance, ZeroSet};
use crate::error::{Error, Result};
use crate::lfunc::LFunctionDescriptor;

/// Number of leading table entries compared with computed zeros.
pub const CROSS_CHECK_COUNT: usize = 20;
pub const CROSS_CHECK_TOL: f64 = 1e-4;

/// Parses one ordinate per line; `#` starts a comment. Returns the
/// ordinates and the coarsest half-unit in the last printed digit.
pub fn parse_zero_table(text: &str) -> Result<(Vec<f64>, f64)> {
    let mut out = Vec::new();
    let mut precision: f64 = 0.0;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let value: f64 = line.parse().map_err(|_| Error::Parse {
            line: i + 1,
            msg: format!("not a decimal number: {line:?}"),
        })?;
        if !value.is_finite() {
            return Err(Error::Parse {
                line: i + 1,
                msg: "non-finite ordinate".into(),
            });
        }
        if let Some(&prev) = out.last() {
            if value <= prev {
                return Err(Error::Ordering { line: i + 1, value });
            }
        }
        let digits = line
            .split_once('.')
            .map(|(_, frac)| frac.chars().take_while(|c| c.is_ascii_digit()).count())
            .unwrap_or(0);
        precision = precision.max(0.5 * 10f64.powi(-(digits as i32)));
        out.push(value);
    }
    Ok((out, precision))
}

/// Reads a published zero table and checks its leading entries against
/// the internal zero finder.
pub fn ingest_zeros(path: &Path, d: &LFunctionDescriptor) -> Result<ZeroSet> {
    let text = fs::read_to_string(path)?;
    ingest_text(&text, d)
}

pub(crate) fn ingest_text(text: &str, d: &LFunctionDescriptor) -> Result<ZeroSet> {
    let (ordinates, precision) = parse_zero_table(text)?;
    let symmetric = d.is_self_dual();
    if ordinates.is_empty() {
        return ZeroSet::new(d, ordinates, symmetric, 0.0, Provenance::Ingested, 0.0);
    }
    if symmetric && ordinates[0] <= 0.0 {
        return Err(Error::Parse {
            line: 1,
            msg: "ordinates of a self-dual L-function must be positive".into(),
        });
    }
    let complete_to = if symmetric {
        *ordinates.last().expect("nonempty")
    } else {
        (-ordinates[0]).min(*ordinates.last().expect("nonempty")).max(0.0)
    };
    cross_check(&ordinates, d)?;
    ZeroSet::new(d, ordinates, symmetric, complete_to, Provenance::Ingested, precision)
}

fn cross_check(ordinates: &[f64], d: &LFunctionDescriptor) -> Result<()> {
    let mut by_size: Vec<f64> = ordinates.to_vec();
    by_size.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
    by_size.truncate(CROSS_CHECK_COUNT);
    let height = by_size.iter().fold(0.0f64, |m, g| m.max(g.abs()));
    let mut table: Vec<f64> = by_size;
    table.sort_by(f64::total_cmp);
    let computed = ZeroSearch::default().run(d, height + 0.5)?;
    let reference: Vec<f64> = computed
        .ordinates()
        .iter()
        .copied()
        .filter(|g| g.abs() <= height + CROSS_CHECK_TOL)
        .collect();
    for (i, &t) in table.iter().enumerate() {
        match reference.get(i) {
            Some(&c) if (c - t).abs() <= CROSS_CHECK_TOL => {}
            Some(&c) => {
                return Err(Error::CrossCheck {
                    index: i + 1,
                    table: t,
                    computed: c,
                })
            }
            None => {
                return Err(Error::CrossCheck {
                    index: i + 1,
                    table: t,
                    computed: f64::NAN,
                })
            }
        }
    }
    if reference.len() > table.len() {
        return Err(Error::CrossCheck {
            index: table.len() + 1,
            table: f64::NAN,
            computed: reference[table.len()],
        });
    }
    Ok(())
}

/// Cache file for a descriptor inside `dir`.
pub fn cache_file(dir: &Path, d: &LFunctionDescriptor) -> PathBuf {
    dir.join(format!("{}.csv", d.hash()))
}

/// Writes `index,ordinate,precision` rows after a `#` metadata line.
pub fn write_zero_cache(zs: &ZeroSet, path: &Path) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    let mut buf = String::new();
    buf.push_str(&format!(
        "# descriptor={} complete_to={} symmetric={} provenance={}\n",
        zs.descriptor_id(),
        zs.complete_to(),
        zs.is_symmetric(),
        zs.provenance().name()
    ));
    buf.push_str("index,ordinate,precision\n");
    for (i, g) in zs.ordinates().iter().enumerate() {
        buf.push_str(&format!("{},{},{}\n", i + 1, g, zs.precision()));
    }
    let mut f = fs::File::create(path)?;
    f.write_all(buf.as_bytes())?;
    Ok(())
}

/// Reads a cache file; a descriptor hash mismatch is an error.
pub fn read_zero_cache(path: &Path, d: &LFunctionDescriptor) -> Result<ZeroSet> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();
    let (_, meta) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty cache file".into(),
    })?;
    let field = |key: &str| -> Result<String> {
        meta.trim_start_matches('#')
            .split_whitespace()
            .find_map(|kv| kv.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
            .map(str::to_string)
            .ok_or(Error::Parse {
                line: 1,
                msg: format!("missing {key}"),
            })
    };
    let id = field("descriptor")?;
    if id != d.hash() {
        return Err(Error::Config(format!(
            "stale zero cache {}: descriptor hash {id} does not match {}",
            path.display(),
            d.hash()
        )));
    }
    let bad = |line: usize, msg: &str| Error::Parse {
        line,
        msg: msg.to_string(),
    };
    let complete_to: f64 = field("complete_to")?.parse().map_err(|_| bad(1, "complete_to"))?;
    let symmetric: bool = field("symmetric")?.parse().map_err(|_| bad(1, "symmetric"))?;
    let provenance = match field("provenance")?.as_str() {
        "computed" => Provenance::Computed,
        "ingested" => Provenance::Ingested,
        _ => return Err(bad(1, "provenance")),
    };
    match lines.next() {
        Some((_, h)) if h.trim() == "index,ordinate,precision" => {}
        _ => return Err(bad(2, "expected header index,ordinate,precision")),
    }
    let mut ordinates = Vec::new();
    let mut precision: f64 = 0.0;
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 3 {
            return Err(bad(i + 1, "expected three columns"));
        }
        ordinates.push(cols[1].trim().parse().map_err(|_| bad(i + 1, "ordinate"))?);
        precision = precision.max(cols[2].trim().parse().map_err(|_| bad(i + 1, "precision"))?);
    }
    ZeroSet::new(d, ordinates, symmetric, complete_to, provenance, precision)
}

/// Cached zeros when the cache reaches `height`, otherwise a fresh search
/// that is written back.
pub fn load_or_find(dir: &Path, d: &LFunctionDescriptor, height: f64) -> Result<ZeroSet> {
    let path = cache_file(dir, d);
    if path.exists() {
        if let Ok(zs) = read_zero_cache(&path, d) {
            if zs.complete_to() >= height {
                return Ok(zs);
            }
        }
    }
    let zs = ZeroSearch::default().run(d, height)?;
    write_zero_cache(&zs, &path)?;
    Ok(zs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lfunc::{dirichlet_descriptor, zeta_descriptor, DirichletCharacter};

    #[test]
    fn parse_table() {
        let (z, p) = parse_zero_table("# zeros\n14.134725142\n\n21.022039639  # second\n").unwrap();
        assert_eq!(z, vec![14.134725142, 21.022039639]);
        assert!((p - 5e-10).abs() < 1e-20);
        assert!(matches!(
            parse_zero_table("1.0\nabc\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_zero_table("2.0\n1.0\n"),
            Err(Error::Ordering { line: 2, .. })
        ));
    }

    #[test]
    fn ingest_small_table() {
        let d = zeta_descriptor();
        let zs = ingest_text("14.134725142\n21.022039639\n25.010857580\n", &d).unwrap();
        assert_eq!(zs.len(), 3);
        assert!((zs.complete_to() - 25.01085758).abs() < 1e-9);
        assert_eq!(zs.provenance(), Provenance::Ingested);
        let empty = ingest_text("", &d).unwrap();
        assert!(empty.is_empty() && empty.complete_to() == 0.0);
        assert!(matches!(
            ingest_text("14.134725142\n25.010857580\n", &d),
            Err(Error::CrossCheck { index: 2, .. })
        ));
        assert!(matches!(
            ingest_text("14.1349\n", &d),
            Err(Error::CrossCheck { index: 1, .. })
        ));
    }

    #[test]
    fn cache_round_trip_and_staleness() {
        let dir = tempfile::tempdir().unwrap();
        let d = zeta_descriptor();
        let zs = load_or_find(dir.path(), &d, 30.0).unwrap();
        let back = read_zero_cache(&cache_file(dir.path(), &d), &d).unwrap();
        assert_eq!(back, zs);
        let other = dirichlet_descriptor(&DirichletCharacter::conrey(3, 2).unwrap()).unwrap();
        assert!(matches!(
            read_zero_cache(&cache_file(dir.path(), &d), &other),
            Err(Error::Config(_))
        ));
    }
}
