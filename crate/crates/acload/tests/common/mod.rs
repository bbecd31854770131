//! Shared fixture builders for the integration test targets.

#![allow(dead_code)] // each test target uses its own subset

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use rand::Rng;
use rand::SeedableRng;

pub const CENSUS_HEADER: &str = "grid_id,lat,lon,hh_1,hh_2,hh_3,hh_4,hh_5,hh_6p";
pub const WEATHER_HEADER: &str = "station_id,lat,lon,timestamp_utc,temp_c";

/// UTC timestamp whose local time at UTC+2 is `hour` on the default
/// simulation day (2025-07-02).
pub fn utc_timestamp_for_local_hour(hour: usize) -> String {
    if hour < 2 {
        format!("2025-07-01T{:02}:00:00Z", hour + 22)
    } else {
        format!("2025-07-02T{:02}:00:00Z", hour - 2)
    }
}

/// Weather CSV covering the full default local day for every station given
/// as (id, lat, lon, hourly temps).
pub fn weather_csv(stations: &[(String, f64, f64, [f64; 24])]) -> String {
    let mut out = String::from(WEATHER_HEADER);
    out.push('\n');
    for (id, lat, lon, temps) in stations {
        for (hour, temp) in temps.iter().enumerate() {
            let _ = writeln!(
                out,
                "{id},{lat},{lon},{},{temp}",
                utc_timestamp_for_local_hour(hour)
            );
        }
    }
    out
}

/// Cosine day profile: `max` at `peak_hour`, `min` twelve hours away.
pub fn sinusoid_day(min: f64, max: f64, peak_hour: usize) -> [f64; 24] {
    let mid = (min + max) / 2.0;
    let amplitude = (max - min) / 2.0;
    std::array::from_fn(|h| {
        let angle = std::f64::consts::TAU * (h as f64 - peak_hour as f64) / 24.0;
        mid + amplitude * angle.cos()
    })
}

/// Lattice coordinates inside a Germany-sized box, dense enough for 200k
/// cells.
pub fn lattice_point(index: usize) -> (f64, f64) {
    const COLS: usize = 450;
    let row = index / COLS;
    let col = index % COLS;
    (47.0 + 0.018 * row as f64, 6.0 + 0.02 * col as f64)
}

/// Synthetic census CSV with seeded pseudo-random counts. Returns the CSV
/// text and the total household count over all cells.
pub fn synthetic_census(cells: usize, seed: u64) -> (String, f64) {
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let mut out = String::from(CENSUS_HEADER);
    out.push('\n');
    let mut total = 0.0f64;
    for i in 0..cells {
        let (lat, lon) = lattice_point(i);
        let counts: [u32; 6] = std::array::from_fn(|_| rng.random_range(0..=120));
        total += counts.iter().map(|&c| f64::from(c)).sum::<f64>();
        let _ = writeln!(
            out,
            "g{i:06},{lat:.4},{lon:.4},{},{},{},{},{},{}",
            counts[0], counts[1], counts[2], counts[3], counts[4], counts[5]
        );
    }
    (out, total)
}

/// `count` stations scattered over the lattice box, each with temperatures
/// from `temps_for`.
pub fn spread_stations(
    count: usize,
    temps_for: impl Fn(usize) -> [f64; 24],
) -> Vec<(String, f64, f64, [f64; 24])> {
    (0..count)
        .map(|i| {
            let lat = 47.5 + 7.0 * (i as f64 * 0.618_033_988_75).fract();
            let lon = 6.5 + 8.0 * (i as f64 * 0.381_966_011_3).fract();
            (format!("w{i:03}"), lat, lon, temps_for(i))
        })
        .collect()
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, contents).expect("fixture write succeeds");
    path
}

pub struct CliOutput {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Run the compiled binary with the given arguments.
pub fn run_acload(args: &[&str]) -> CliOutput {
    let output = Command::new(env!("CARGO_BIN_EXE_acload"))
        .args(args)
        .output()
        .expect("binary executes");
    CliOutput {
        status: output.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&output.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&output.stderr).into_owned(),
    }
}

pub fn read_bytes(path: &Path) -> Vec<u8> {
    fs::read(path).unwrap_or_else(|e| panic!("reading {}: {e}", path.display()))
}

/// True when both manifests agree on everything except the wall-clock
/// duration, which varies between runs by nature.
pub fn manifests_match_except_wall_clock(a: &Path, b: &Path) -> bool {
    let load = |path: &Path| -> serde_json::Value {
        let text = fs::read_to_string(path)
            .unwrap_or_else(|e| panic!("reading {}: {e}", path.display()));
        serde_json::from_str(&text).expect("manifest is valid JSON")
    };
    let mut left = load(a);
    let mut right = load(b);
    for value in [&mut left, &mut right] {
        value
            .as_object_mut()
            .expect("manifest is a JSON object")
            .remove("wall_clock_seconds")
            .expect("manifest records wall-clock seconds");
    }
    left == right
}
