//! Benchmark rows and the command-line front end.
//!
//! Every row is `subject, metric, value, params` with `params` written as
//! `k=v;k=v`. Analytic rows are exact; `fp_measured` depends on the seed;
//! `wall_ns_per_block` rows are only produced on request.

use crate::ciphers::{key_horizon, make_cipher, CipherName};
use crate::config::{KeyValues, PolicyConfig};
use crate::error::{Error, Result};
use crate::hashes::HashFamily;
use crate::modes::{cbc_encrypt, cbc_mac, cbc_then_mac, ccm_seal, gcm_seal, ocb_seal, CallLedger, ModeName};
use crate::policy::{
    forgery_days, forgery_days_rounded, select_cipher, throughput_bps, DEFAULT_CLOCK_HZ, ROUNDING_STEP,
};
use crate::replay::{replay_state_bytes, BloomState, FalsePositiveModel, ReplayScheme, StateScope};
use crate::simnet::{run_scenario, Scenario};
use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub subject: String,
    pub metric: String,
    pub value: f64,
    pub params: Vec<(String, String)>,
}

impl BenchRow {
    pub fn new(subject: impl Into<String>, metric: impl Into<String>, value: f64) -> Self {
        BenchRow {
            subject: subject.into(),
            metric: metric.into(),
            value,
            params: Vec::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.params.push((key.to_string(), value.to_string()));
        self
    }

    pub fn param(&self, key: &str) -> Option<&str> {
        self.params.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn params_field(&self) -> String {
        self.params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";")
    }
}

pub fn write_csv<W: Write>(rows: &[BenchRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(["subject", "metric", "value", "params"])
        .map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.subject.as_str(),
            r.metric.as_str(),
            &r.value.to_string(),
            &r.params_field(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv(text: &str) -> Result<Vec<BenchRow>> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    rdr.records()
        .map(|rec| {
            let rec = rec.map_err(|e| Error::Io(e.to_string()))?;
            let value = rec[2]
                .parse::<f64>()
                .map_err(|e| Error::Io(format!("value `{}`: {e}", &rec[2])))?;
            let params = rec[3]
                .split(';')
                .filter(|p| !p.is_empty())
                .filter_map(|p| p.split_once('='))
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect();
            Ok(BenchRow {
                subject: rec[0].to_string(),
                metric: rec[1].to_string(),
                value,
                params,
            })
        })
        .collect()
}

fn test_key(len: usize, salt: u8) -> Vec<u8> {
    (0..len as u8).map(|i| i.wrapping_mul(17) ^ salt).collect()
}

/// Table budgets, block/key sizes and key horizon for every cipher.
pub fn bench_ciphers(timing: bool) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for name in CipherName::ALL {
        let spec = name.spec();
        let sub = name.as_str();
        rows.push(BenchRow::new(sub, "table_bytes", spec.table_bytes as f64));
        rows.push(BenchRow::new(sub, "block_bits", spec.block_bits as f64));
        rows.push(BenchRow::new(sub, "key_bits", spec.key_bits as f64));
        rows.push(BenchRow::new(sub, "rounds", spec.rounds as f64));
        rows.push(BenchRow::new(sub, "key_horizon", key_horizon(spec.key_bits)? as f64));
        if timing {
            let c = make_cipher(sub, &test_key(spec.key_len(), 0))?;
            let mut block = vec![0u8; spec.block_len()];
            let reps = 20_000u32;
            let t = Instant::now();
            for _ in 0..reps {
                c.encrypt_in_place(&mut block)?;
            }
            std::hint::black_box(&block);
            rows.push(BenchRow::new(
                sub,
                "wall_ns_per_block",
                t.elapsed().as_nanos() as f64 / reps as f64,
            ));
        }
    }
    let speed = CipherName::AesSpeed.spec().table_bytes as f64;
    let size = CipherName::AesSize.spec().table_bytes as f64;
    rows.push(BenchRow::new("aes_size", "table_bytes_saved", speed - size).with("versus", "aes_speed"));
    rows.push(
        BenchRow::new("aes_size", "table_saving_pct", (speed - size) / speed * 100.0).with("versus", "aes_speed"),
    );
    Ok(rows)
}

/// Runs `mode` over `n` blocks and returns its call ledger.
pub fn run_mode(mode: ModeName, cipher: &str, n: usize) -> Result<CallLedger> {
    let key_len = cipher.parse::<CipherName>()?.spec().key_len();
    let c = make_cipher(cipher, &test_key(key_len, 0))?;
    let b = c.block_len();
    let msg: Vec<u8> = (0..n * b).map(|i| i as u8).collect();
    let iv = vec![0x5Au8; b];
    Ok(match mode {
        ModeName::Cbc => cbc_encrypt(&c, &iv, &msg)?.1,
        ModeName::CbcMac => cbc_mac(&c, &msg, 8)?.1,
        ModeName::CbcThenMac => {
            let mac = make_cipher(cipher, &test_key(key_len, 0xA5))?;
            cbc_then_mac(&c, &mac, &iv, &msg, 8)?.2
        }
        ModeName::Ocb => ocb_seal(&c, &iv, &msg, 8)?.1,
        ModeName::Ccm => ccm_seal(&c, &[7; 13], &[], &msg, 8)?.1,
        ModeName::Gcm => gcm_seal(&c, &[7; 12], &[], &msg, 8)?.1,
    })
}

/// Per-mode cipher calls for each message size. CCM and GCM are skipped for
/// 64-bit ciphers.
pub fn bench_modes(cipher: &str, blocks: &[usize], timing: bool) -> Result<Vec<BenchRow>> {
    let spec = cipher.parse::<CipherName>()?.spec();
    let mut rows = Vec::new();
    for mode in ModeName::ALL {
        if mode.needs_wide_block() && spec.block_bits != 128 {
            continue;
        }
        for &n in blocks {
            if n == 0 {
                return Err(Error::NonPositive("blocks"));
            }
            let ledger = run_mode(mode, cipher, n)?;
            rows.push(
                BenchRow::new(mode.as_str(), "cipher_calls", ledger.cipher_calls as f64)
                    .with("cipher", cipher)
                    .with("blocks", n),
            );
            if timing {
                let reps = 2_000u32;
                let t = Instant::now();
                for _ in 0..reps {
                    std::hint::black_box(run_mode(mode, cipher, n)?);
                }
                rows.push(
                    BenchRow::new(
                        mode.as_str(),
                        "wall_ns_per_block",
                        t.elapsed().as_nanos() as f64 / (reps as f64 * n as f64),
                    )
                    .with("cipher", cipher)
                    .with("blocks", n),
                );
            }
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplayBench {
    pub schemes: Vec<ReplayScheme>,
    pub nodes: usize,
    pub window: usize,
    pub m: usize,
    pub k: usize,
    /// Tags held by the filter when the false-positive rate is evaluated.
    pub load: u64,
    pub trials: u64,
    pub seed: u64,
}

impl Default for ReplayBench {
    fn default() -> Self {
        ReplayBench {
            schemes: ReplayScheme::ALL.to_vec(),
            nodes: 10,
            window: 8,
            m: 512,
            k: 8,
            load: 32,
            trials: 100_000,
            seed: 0,
        }
    }
}

/// Monte-Carlo false-positive count: `trials` times, fill a fresh filter with
/// `load` distinct random 4-byte tags and probe one more distinct tag.
pub fn measure_fp(m: usize, k: usize, load: u64, trials: u64, seed: u64) -> Result<u64> {
    let family = HashFamily::first(k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0;
    let mut seen = HashSet::new();
    let mut tags = Vec::new();
    for _ in 0..trials {
        let mut b = BloomState::new(m, family.clone(), load.max(1) as usize)?;
        seen.clear();
        tags.clear();
        while tags.len() < load as usize + 1 {
            let t = rng.gen::<u32>();
            if seen.insert(t) {
                tags.push(t);
            }
        }
        let probe = tags[0];
        for t in &tags[1..] {
            b.insert(&t.to_be_bytes());
        }
        if b.contains(&probe.to_be_bytes()) {
            hits += 1;
        }
    }
    Ok(hits)
}

pub fn bench_replay(cfg: &ReplayBench) -> Result<Vec<BenchRow>> {
    if cfg.trials == 0 {
        return Err(Error::NonPositive("trials"));
    }
    let mut rows = Vec::new();
    for &scheme in &cfg.schemes {
        let sub = scheme.as_str();
        for (scope, name) in [(StateScope::PerNode, "per_node"), (StateScope::Network, "network")] {
            let bytes = replay_state_bytes(sub, cfg.nodes, cfg.window, cfg.m, scope)?;
            let mut row = BenchRow::new(sub, "state_bytes", bytes as f64)
                .with("scope", name)
                .with("nodes", cfg.nodes);
            match scheme {
                ReplayScheme::Counter => {}
                ReplayScheme::Digest => row = row.with("window", cfg.window),
                ReplayScheme::Bloom => row = row.with("m", cfg.m),
            }
            rows.push(row);
        }
        if scheme == ReplayScheme::Bloom {
            let fm = FalsePositiveModel::<f64>::new(cfg.m as u64, cfg.k as u32)?;
            let ctx = |r: BenchRow| r.with("m", cfg.m).with("k", cfg.k).with("n", cfg.load);
            rows.push(ctx(
                BenchRow::new(sub, "fp_theoretical", fm.exact(cfg.load)).with("form", "exact")
            ));
            rows.push(ctx(
                BenchRow::new(sub, "fp_theoretical", fm.exponential(cfg.load)).with("form", "exponential")
            ));
            rows.push(ctx(
                BenchRow::new(sub, "fp_theoretical", fm.saturated()).with("form", "saturated")
            ));
            let hits = measure_fp(cfg.m, cfg.k, cfg.load, cfg.trials, cfg.seed)?;
            rows.push(ctx(BenchRow::new(sub, "fp_measured", hits as f64 / cfg.trials as f64)
                .with("trials", cfg.trials)
                .with("seed", cfg.seed)));
        }
    }
    Ok(rows)
}

/// Forgery time for every (tag size, bandwidth) pair, exact and with the
/// attempt rate rounded up to a multiple of 40 per second.
pub fn bench_policy(mac_bits: &[u32], packet_bytes: u64, bandwidths: &[u64]) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for &k in mac_bits {
        for &w in bandwidths {
            let ctx = |r: BenchRow| {
                r.with("mac_bits", k)
                    .with("packet_bytes", packet_bytes)
                    .with("bandwidth_bps", w)
            };
            rows.push(
                ctx(BenchRow::new(
                    "forgery",
                    "forgery_days",
                    forgery_days(k, packet_bytes, w)?,
                ))
                .with("rounding", "exact"),
            );
            rows.push(
                ctx(BenchRow::new(
                    "forgery",
                    "forgery_days",
                    forgery_days_rounded(k, packet_bytes, w)?,
                ))
                .with("rounding", format!("ceil{ROUNDING_STEP}")),
            );
        }
    }
    Ok(rows)
}

/// Mode table row for a policy configuration.
pub fn bench_policy_config(p: &PolicyConfig) -> Result<Vec<BenchRow>> {
    let m = p.mode;
    let cipher = if m.is_null() {
        "none".to_string()
    } else {
        select_cipher(&m, p.tier)?.to_string()
    };
    Ok(vec![BenchRow::new(m.name, "tag_len", m.tag_len as f64)
        .with("id", m.id)
        .with("algorithm", m.algorithm.as_str())
        .with("tier", p.tier.as_str())
        .with("cipher", cipher)
        .with(
            "replay",
            if m.replay { p.replay_scheme.as_str() } else { "off" },
        )])
}

pub fn bench_sim(s: &Scenario) -> Result<Vec<BenchRow>> {
    let r = run_scenario(s)?;
    let ctx = |row: BenchRow| {
        row.with("mode", s.policy.mode.name)
            .with("replay", s.policy.replay_scheme.as_str())
            .with("seed", s.seed)
            .with("ticks", s.ticks)
    };
    Ok(r.metrics()
        .into_iter()
        .map(|(metric, v)| ctx(BenchRow::new("sim", metric, v as f64)))
        .collect())
}

#[derive(Debug, Parser)]
#[command(
    name = "flexisec",
    version,
    about = "Link-layer security toolkit: benchmarks, analytics and simulation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Write CSV here instead of standard output.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// key = value settings file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Add wall-clock rows (not reproducible).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Table budgets, sizes and key horizons.
    Ciphers {
        #[command(flatten)]
        common: Common,
    },
    /// Block-cipher calls per mode.
    Modes {
        #[arg(long, default_value = "aes_speed")]
        cipher: String,
        #[arg(long, value_delimiter = ',', default_value = "1,2,4,8")]
        blocks: Vec<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Replay-state sizes and Bloom false-positive rates.
    Replay {
        /// counter, digest, bloom or all.
        #[arg(long, default_value = "all")]
        scheme: String,
        #[arg(long, default_value_t = 10)]
        nodes: usize,
        #[arg(long, default_value_t = 8)]
        window: usize,
        #[arg(long, default_value_t = 512)]
        m: usize,
        #[arg(long, default_value_t = 8)]
        k: usize,
        #[arg(long, default_value_t = 32)]
        load: u64,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Forgery-time grid, throughput, and the configured mode row.
    Policy {
        #[arg(long, value_delimiter = ',', default_value = "32,64")]
        mac_bits: Vec<u32>,
        #[arg(long, default_value_t = 68)]
        packet_bytes: u64,
        #[arg(long, value_delimiter = ',', default_value = "19200,250000")]
        bandwidths: Vec<u64>,
        /// Cycles per block for a throughput row.
        #[arg(long)]
        cycles: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_CLOCK_HZ)]
        clock_hz: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Run a simulator scenario.
    Sim {
        #[command(flatten)]
        common: Common,
    },
}

fn load_kv(common: &Common) -> Result<Option<KeyValues>> {
    common.config.as_ref().map(KeyValues::load).transpose()
}

fn execute(cmd: Command) -> Result<(Vec<BenchRow>, Common, Option<String>)> {
    Ok(match cmd {
        Command::Ciphers { common } => (bench_ciphers(common.timing)?, common, None),
        Command::Modes { cipher, blocks, common } => {
            let (mut cipher, mut blocks) = (cipher, blocks);
            if let Some(kv) = load_kv(&common)? {
                kv.only(&["cipher", "blocks"])?;
                if let Some(c) = kv.get("cipher") {
                    cipher = c.to_string();
                }
                if let Some(b) = kv.get("blocks") {
                    blocks = b
                        .split(',')
                        .map(|t| {
                            t.trim()
                                .parse()
                                .map_err(|e| Error::Config(format!("blocks `{t}`: {e}")))
                        })
                        .collect::<Result<_>>()?;
                }
            }
            (bench_modes(&cipher, &blocks, common.timing)?, common, None)
        }
        Command::Replay {
            scheme,
            nodes,
            window,
            m,
            k,
            load,
            trials,
            common,
        } => {
            let mut cfg = ReplayBench {
                schemes: if scheme == "all" {
                    ReplayScheme::ALL.to_vec()
                } else {
                    vec![scheme.parse()?]
                },
                nodes,
                window,
                m,
                k,
                load,
                trials,
                seed: common.seed.unwrap_or(0),
            };
            if let Some(kv) = load_kv(&common)? {
                kv.only(&[
                    "replay_scheme",
                    "nodes",
                    "window",
                    "bloom_m",
                    "bloom_k",
                    "load",
                    "trials",
                    "seed",
                ])?;
                if let Some(s) = kv.parsed::<ReplayScheme>("replay_scheme")? {
                    cfg.schemes = vec![s];
                }
                cfg.nodes = kv.parsed_or("nodes", cfg.nodes)?;
                cfg.window = kv.parsed_or("window", cfg.window)?;
                cfg.m = kv.parsed_or("bloom_m", cfg.m)?;
                cfg.k = kv.parsed_or("bloom_k", cfg.k)?;
                cfg.load = kv.parsed_or("load", cfg.load)?;
                cfg.trials = kv.parsed_or("trials", cfg.trials)?;
                if common.seed.is_none() {
                    cfg.seed = kv.parsed_or("seed", cfg.seed)?;
                }
            }
            (bench_replay(&cfg)?, common, None)
        }
        Command::Policy {
            mac_bits,
            packet_bytes,
            bandwidths,
            cycles,
            clock_hz,
            common,
        } => {
            let mut rows = bench_policy(&mac_bits, packet_bytes, &bandwidths)?;
            if let Some(cycles) = cycles {
                rows.push(
                    BenchRow::new("throughput", "throughput_bps", throughput_bps(64, clock_hz, cycles)?)
                        .with("message_bits", 64)
                        .with("clock_hz", clock_hz)
                        .with("cycles", cycles),
                );
            }
            if let Some(kv) = load_kv(&common)? {
                kv.only(&PolicyConfig::KEYS)?;
                rows.extend(bench_policy_config(&PolicyConfig::from_kv(&kv)?)?);
            }
            (rows, common, None)
        }
        Command::Sim { common } => {
            let mut s = match load_kv(&common)? {
                Some(kv) => Scenario::from_kv(&kv)?,
                None => Scenario::default(),
            };
            if let Some(seed) = common.seed {
                s.seed = seed;
            }
            let report = run_scenario(&s)?;
            let rows = bench_sim(&s)?;
            (rows, common, Some(report.summary()))
        }
    })
}

/// Parses `args` (program name first), runs the subcommand and writes CSV
/// to `--csv` or `out`. Returns the process exit code.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return 2;
            }
            let _ = write!(out, "{e}");
            return 0;
        }
    };
    let result = execute(cli.command).and_then(|(rows, common, summary)| {
        match &common.csv {
            Some(path) => {
                let f = std::fs::File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                write_csv(&rows, f)?;
                if let Some(s) = summary {
                    out.write_all(s.as_bytes())?;
                }
            }
            None => {
                write_csv(&rows, &mut *out)?;
                if let Some(s) = summary {
                    err.write_all(s.as_bytes())?;
                }
            }
        }
        Ok(())
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn calls(rows: &[BenchRow], mode: &str, n: usize) -> f64 {
        rows.iter()
            .find(|r| r.subject == mode && r.metric == "cipher_calls" && r.param("blocks") == Some(&n.to_string()))
            .unwrap()
            .value
    }

    #[test]
    fn mode_call_counts() {
        let rows = bench_modes("aes_speed", &[1, 2, 4, 8], false).unwrap();
        for n in [1, 2, 4, 8] {
            let nf = n as f64;
            assert_eq!(calls(&rows, "ocb", n), nf + 2.0);
            assert_eq!(calls(&rows, "cbc", n), nf);
            assert_eq!(calls(&rows, "cbc_mac", n), nf + 1.0);
            assert_eq!(calls(&rows, "cbc+cbc_mac", n), 2.0 * nf + 1.0);
            assert!(calls(&rows, "ccm", n) > calls(&rows, "ocb", n));
        }
    }

    #[test]
    fn narrow_ciphers_skip_wide_modes() {
        let rows = bench_modes("xxtea", &[2], false).unwrap();
        assert!(rows.iter().all(|r| r.subject != "ccm" && r.subject != "gcm"));
        assert_eq!(calls(&rows, "ocb", 2), 4.0);
    }

    #[test]
    fn csv_round_trip() {
        let rows = bench_policy(&[32], 68, &[19_200]).unwrap();
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("subject,metric,value,params\n"));
        assert_eq!(read_csv(&text).unwrap(), rows);
    }

    #[test]
    fn replay_rows() {
        let rows = bench_replay(&ReplayBench {
            trials: 2_000,
            ..ReplayBench::default()
        })
        .unwrap();
        let get = |s: &str, scope: &str| {
            rows.iter()
                .find(|r| r.subject == s && r.metric == "state_bytes" && r.param("scope") == Some(scope))
                .unwrap()
                .value
        };
        assert_eq!(get("counter", "network"), 180.0);
        assert_eq!(get("digest", "per_node"), 1440.0);
        assert_eq!(get("bloom", "per_node"), 64.0);
    }

    #[test]
    fn cli_exit_codes() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run_cli(["flexisec", "frobnicate"], &mut out, &mut err), 2);
        assert_eq!(run_cli(["flexisec", "modes", "--cipher", "des"], &mut out, &mut err), 1);
        assert!(String::from_utf8_lossy(&err).contains("unknown cipher"));
        out.clear();
        assert_eq!(run_cli(["flexisec", "ciphers"], &mut out, &mut err), 0);
        assert!(String::from_utf8_lossy(&out).contains("aes_speed,table_bytes,2304,"));
    }
}
