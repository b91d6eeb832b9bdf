//! Deterministic discrete-event simulation of a multi-hop unicast network
//! with hop-by-hop verification, a lossy channel and a capture-and-replay
//! adversary.
//!
//! Time is a unitless tick. Every transmission takes one tick (plus a random
//! extra delay when reordered). Events at the same tick run in scheduling
//! order, so a scenario and its seed fix the whole trace.

use crate::ciphers::{make_named, CipherName, KeyedCipher};
use crate::config::{KeyValues, PolicyConfig};
use crate::error::{Error, Result};
use crate::modes::CallLedger;
use crate::packet::{open_frame, seal_frame, FrameHeader, FrameVerdict, SendCounters, MAX_PAYLOAD};
use crate::policy::{select_cipher, FlexiMode};
use crate::replay::{ReplayConfig, ReplayScheme, ReplayState, DEFAULT_COUNTER_NEIGHBORS, DEFAULT_DIGEST_NEIGHBORS};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, VecDeque};
use std::fmt::Write as _;

/// Active-message type stamped on every simulated frame.
pub const SIM_AM: u8 = 0x0A;
pub const DEFAULT_KEY: [u8; 16] = *b"flexisec-sim-key";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    adjacency: BTreeMap<u16, BTreeSet<u16>>,
    sources: Vec<u16>,
    sink: u16,
}

impl Topology {
    pub fn new(links: &[(u16, u16)], sources: &[u16], sink: u16) -> Result<Self> {
        let mut adjacency: BTreeMap<u16, BTreeSet<u16>> = BTreeMap::new();
        for &(a, b) in links {
            if a == b {
                return Err(Error::Topology(format!("self-loop on node {a}")));
            }
            adjacency.entry(a).or_default().insert(b);
            adjacency.entry(b).or_default().insert(a);
        }
        if sources.is_empty() {
            return Err(Error::Topology("no source nodes".into()));
        }
        for &n in sources.iter().chain([&sink]) {
            if !adjacency.contains_key(&n) {
                return Err(Error::Topology(format!("node {n} has no links")));
            }
        }
        if sources.contains(&sink) {
            return Err(Error::Topology(format!("node {sink} is both source and sink")));
        }
        Ok(Topology {
            adjacency,
            sources: sources.to_vec(),
            sink,
        })
    }

    /// Nodes `1..=n` in a line; node 1 sources, node `n` is the sink.
    pub fn chain(n: u16) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewNodes);
        }
        let links: Vec<(u16, u16)> = (1..n).map(|i| (i, i + 1)).collect();
        Self::new(&links, &[1], n)
    }

    /// Sink 1 with `sources` leaves numbered from 2.
    pub fn star(sources: u16) -> Result<Self> {
        if sources == 0 {
            return Err(Error::TooFewNodes);
        }
        let leaves: Vec<u16> = (2..sources + 2).collect();
        let links: Vec<(u16, u16)> = leaves.iter().map(|&l| (l, 1)).collect();
        Self::new(&links, &leaves, 1)
    }

    pub fn nodes(&self) -> impl Iterator<Item = u16> + '_ {
        self.adjacency.keys().copied()
    }

    pub fn sources(&self) -> &[u16] {
        &self.sources
    }

    pub fn sink(&self) -> u16 {
        self.sink
    }

    /// Next hop toward the sink for every node that can reach it
    /// (shortest path, ties to the lowest id).
    pub fn routes(&self) -> Result<BTreeMap<u16, u16>> {
        let mut next = BTreeMap::new();
        let mut seen = BTreeSet::from([self.sink]);
        let mut queue = VecDeque::from([self.sink]);
        while let Some(n) = queue.pop_front() {
            for &m in &self.adjacency[&n] {
                if seen.insert(m) {
                    next.insert(m, n);
                    queue.push_back(m);
                }
            }
        }
        if let Some(s) = self.sources.iter().find(|s| !next.contains_key(s)) {
            return Err(Error::Topology(format!("source {s} cannot reach sink {}", self.sink)));
        }
        Ok(next)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Adversary {
    Off,
    /// Records the first `count` honest deliveries and re-injects each one,
    /// byte for byte, at the same receiver `delay` ticks later.
    CaptureReplay {
        delay: u64,
        count: u64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub topology: Topology,
    pub ticks: u64,
    pub send_period: u64,
    pub adversary: Adversary,
    pub seed: u64,
    pub drop_rate: f64,
    pub reorder_rate: f64,
    /// Probability that the channel flips one bit of a frame.
    pub corrupt_rate: f64,
    pub policy: PolicyConfig,
    pub replay: ReplayConfig,
    /// Overrides the tier's cipher.
    pub cipher: Option<CipherName>,
    pub key: Vec<u8>,
    pub payload_len: usize,
}

impl Default for Scenario {
    fn default() -> Self {
        Scenario {
            topology: Topology::chain(3).expect("three-node chain"),
            ticks: 1_000,
            send_period: 4,
            adversary: Adversary::Off,
            seed: 0,
            drop_rate: 0.0,
            reorder_rate: 0.0,
            corrupt_rate: 0.0,
            policy: PolicyConfig::default(),
            replay: ReplayConfig::default(),
            cipher: None,
            key: DEFAULT_KEY.to_vec(),
            payload_len: 16,
        }
    }
}

fn id_list(s: &str) -> Result<Vec<u16>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u16>()
                .map_err(|e| Error::Config(format!("node id `{t}`: {e}")))
        })
        .collect()
}

fn link_list(s: &str) -> Result<Vec<(u16, u16)>> {
    s.split(',')
        .map(|t| {
            let (a, b) = t
                .split_once('-')
                .ok_or_else(|| Error::Config(format!("link `{t}` is not a-b")))?;
            let a = a
                .trim()
                .parse::<u16>()
                .map_err(|e| Error::Config(format!("link `{t}`: {e}")))?;
            let b = b
                .trim()
                .parse::<u16>()
                .map_err(|e| Error::Config(format!("link `{t}`: {e}")))?;
            Ok((a, b))
        })
        .collect()
}

impl Scenario {
    pub const KEYS: [&'static str; 24] = [
        "topology",
        "links",
        "sources",
        "sink",
        "ticks",
        "send_period",
        "adversary",
        "adversary_delay",
        "adversary_count",
        "seed",
        "drop_rate",
        "reorder_rate",
        "corrupt_rate",
        "mode",
        "tier",
        "replay_scheme",
        "window",
        "max_neighbors",
        "bloom_m",
        "bloom_k",
        "bloom_capacity",
        "cipher",
        "key",
        "payload_len",
    ];

    /// Builds a scenario from a key/value file. Topology is either
    /// `topology = chain:N` / `star:N` or explicit `links = 1-2,2-3` with
    /// `sources` and `sink`.
    pub fn from_kv(kv: &KeyValues) -> Result<Self> {
        kv.only(&Self::KEYS)?;
        let d = Scenario::default();
        let topology = match (kv.get("topology"), kv.get("links")) {
            (Some(_), Some(_)) => return Err(Error::Config("give either `topology` or `links`".into())),
            (Some(t), None) => {
                let (kind, n) = t
                    .split_once(':')
                    .ok_or_else(|| Error::Config(format!("topology `{t}` is not kind:N")))?;
                let n: u16 = n
                    .trim()
                    .parse()
                    .map_err(|e| Error::Config(format!("topology `{t}`: {e}")))?;
                match kind.trim() {
                    "chain" => Topology::chain(n)?,
                    "star" => Topology::star(n)?,
                    other => return Err(Error::Config(format!("unknown topology kind `{other}`"))),
                }
            }
            (None, Some(l)) => {
                let sources = id_list(
                    kv.get("sources")
                        .ok_or_else(|| Error::Config("`links` needs `sources`".into()))?,
                )?;
                let sink = kv
                    .parsed::<u16>("sink")?
                    .ok_or_else(|| Error::Config("`links` needs `sink`".into()))?;
                Topology::new(&link_list(l)?, &sources, sink)?
            }
            (None, None) => d.topology.clone(),
        };
        let adversary = match kv.get("adversary").unwrap_or("off") {
            "off" => Adversary::Off,
            "capture_replay" => Adversary::CaptureReplay {
                delay: kv.parsed_or("adversary_delay", 1)?,
                count: kv.parsed_or("adversary_count", 100)?,
            },
            other => return Err(Error::Config(format!("unknown adversary `{other}`"))),
        };
        let dr = ReplayConfig::default();
        let replay = ReplayConfig {
            window: kv.parsed_or("window", dr.window)?,
            max_neighbors: kv.parsed("max_neighbors")?,
            m: kv.parsed_or("bloom_m", dr.m)?,
            k: kv.parsed_or("bloom_k", dr.k)?,
            capacity: kv.parsed_or("bloom_capacity", dr.capacity)?,
        };
        let key = match kv.get("key") {
            Some(h) => hex::decode(h).map_err(|e| Error::Config(format!("key: {e}")))?,
            None => d.key.clone(),
        };
        Ok(Scenario {
            topology,
            ticks: kv.parsed_or("ticks", d.ticks)?,
            send_period: kv.parsed_or("send_period", d.send_period)?,
            adversary,
            seed: kv.parsed_or("seed", d.seed)?,
            drop_rate: kv.parsed_or("drop_rate", d.drop_rate)?,
            reorder_rate: kv.parsed_or("reorder_rate", d.reorder_rate)?,
            corrupt_rate: kv.parsed_or("corrupt_rate", d.corrupt_rate)?,
            policy: PolicyConfig::from_kv(kv)?,
            replay,
            cipher: kv.parsed("cipher")?,
            key,
            payload_len: kv.parsed_or("payload_len", d.payload_len)?,
        })
    }

    fn validate(&self) -> Result<()> {
        if self.ticks == 0 {
            return Err(Error::NonPositive("ticks"));
        }
        if self.send_period == 0 {
            return Err(Error::NonPositive("send_period"));
        }
        for (name, p) in [
            ("drop_rate", self.drop_rate),
            ("reorder_rate", self.reorder_rate),
            ("corrupt_rate", self.corrupt_rate),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Config(format!("{name} = {p} is not a probability")));
            }
        }
        if self.payload_len > MAX_PAYLOAD {
            return Err(Error::PayloadTooLong(self.payload_len));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Source,
    Relay,
    Sink,
}

#[derive(Debug, Clone)]
pub struct SimNode {
    pub id: u16,
    pub role: Role,
    pub next_hop: Option<u16>,
    pub replay: Option<ReplayState>,
    pub counters: SendCounters,
}

/// Security material shared by every node (one network-wide key).
pub struct LinkSecurity {
    pub mode: FlexiMode,
    pub cipher: Option<KeyedCipher>,
}

impl LinkSecurity {
    pub fn new(mode: FlexiMode, cipher: Option<KeyedCipher>) -> Self {
        LinkSecurity { mode, cipher }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HopOutcome {
    /// Verified and resealed toward `to`.
    Forward {
        to: u16,
        bytes: Vec<u8>,
    },
    /// Verified at the sink.
    Delivered {
        payload: Vec<u8>,
    },
    /// Verified, but the node has no counter left toward its next hop.
    Exhausted,
    Dropped(FrameVerdict),
}

/// Opens a frame at `node` and, when it verifies, reseals the plaintext
/// toward the node's next hop under the node's own counter. Failures are
/// returned as outcomes, never as errors.
pub fn hop_forward(sec: &LinkSecurity, node: &mut SimNode, frame_bytes: &[u8], ledger: &mut CallLedger) -> HopOutcome {
    let opened = match open_frame(&sec.mode, sec.cipher.as_ref(), node.replay.as_mut(), frame_bytes) {
        Ok(o) => o,
        Err(_) => return HopOutcome::Dropped(FrameVerdict::Forged),
    };
    *ledger += opened.ledger;
    if opened.verdict != FrameVerdict::Accept {
        return HopOutcome::Dropped(opened.verdict);
    }
    let payload = opened.payload.expect("accepted frames carry plaintext");
    let Some(to) = node.next_hop else {
        return HopOutcome::Delivered { payload };
    };
    let Ok(ctr) = node.counters.next(to) else {
        return HopOutcome::Exhausted;
    };
    let header = FrameHeader {
        dest: to,
        am: opened.header.am,
        len: 0,
        src: node.id,
        ctr,
    };
    match seal_frame(&sec.mode, sec.cipher.as_ref(), &mut node.counters, header, &payload) {
        Ok((frame, l)) => {
            *ledger += l;
            HopOutcome::Forward {
                to,
                bytes: frame.encode(),
            }
        }
        Err(_) => HopOutcome::Exhausted,
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SimReport {
    /// Every transmission, honest or injected.
    pub frames_sent: u64,
    pub frames_accepted: u64,
    pub frames_forged: u64,
    pub frames_replay_flagged: u64,
    pub dropped_by_channel: u64,
    /// Honest frames flagged as replays.
    pub false_positives: u64,
    /// Injected frames that were accepted.
    pub false_negatives: u64,
    pub honest_originated: u64,
    pub delivered_end_to_end: u64,
    pub adversary_injected: u64,
    /// Injected frames that were accepted and resealed onward.
    pub replays_propagated: u64,
    pub counter_exhausted: u64,
    pub ledger_totals: CallLedger,
    /// Replay-state bytes held across all nodes at the end of the run.
    pub state_bytes: u64,
}

impl SimReport {
    /// `sent = accepted + forged + replay_flagged + dropped_by_channel`
    pub fn conserved(&self) -> bool {
        self.frames_sent
            == self.frames_accepted + self.frames_forged + self.frames_replay_flagged + self.dropped_by_channel
    }

    pub fn metrics(&self) -> Vec<(&'static str, u64)> {
        vec![
            ("frames_sent", self.frames_sent),
            ("frames_accepted", self.frames_accepted),
            ("frames_forged", self.frames_forged),
            ("frames_replay_flagged", self.frames_replay_flagged),
            ("dropped_by_channel", self.dropped_by_channel),
            ("false_positives", self.false_positives),
            ("false_negatives", self.false_negatives),
            ("honest_originated", self.honest_originated),
            ("delivered_end_to_end", self.delivered_end_to_end),
            ("adversary_injected", self.adversary_injected),
            ("replays_propagated", self.replays_propagated),
            ("counter_exhausted", self.counter_exhausted),
            ("cipher_calls", self.ledger_totals.cipher_calls),
            ("state_bytes", self.state_bytes),
        ]
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        for (k, v) in self.metrics() {
            let _ = writeln!(s, "{k:<22} {v}");
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Origin {
    Honest,
    Injected,
    /// Resealed copy of an accepted injection.
    Propagated,
}

#[derive(Debug)]
enum Kind {
    Emit { source: u16 },
    Deliver { to: u16, bytes: Vec<u8>, origin: Origin },
}

#[derive(Debug)]
struct Event {
    tick: u64,
    seq: u64,
    kind: Kind,
}

impl PartialEq for Event {
    fn eq(&self, other: &Self) -> bool {
        (self.tick, self.seq) == (other.tick, other.seq)
    }
}
impl Eq for Event {}
impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Event {
    // min-heap on (tick, seq)
    fn cmp(&self, other: &Self) -> Ordering {
        (other.tick, other.seq).cmp(&(self.tick, self.seq))
    }
}

struct Sim<'a> {
    s: &'a Scenario,
    sec: LinkSecurity,
    nodes: BTreeMap<u16, SimNode>,
    queue: BinaryHeap<Event>,
    seq: u64,
    channel: ChaCha8Rng,
    payloads: ChaCha8Rng,
    captured: u64,
    report: SimReport,
}

impl Sim<'_> {
    fn schedule(&mut self, tick: u64, kind: Kind) {
        self.queue.push(Event {
            tick,
            seq: self.seq,
            kind,
        });
        self.seq += 1;
    }

    /// Puts a frame on the air. The channel draws the same five values per
    /// transmission whatever the frame contents, so crypto settings never
    /// shift the loss pattern.
    fn transmit(&mut self, now: u64, to: u16, mut bytes: Vec<u8>, origin: Origin) {
        self.report.frames_sent += 1;
        let drop = self.channel.gen::<f64>() < self.s.drop_rate;
        let corrupt = self.channel.gen::<f64>() < self.s.corrupt_rate;
        let bit = self.channel.next_u32() as usize;
        let reorder = self.channel.gen::<f64>() < self.s.reorder_rate;
        let extra = self.channel.gen_range(1..=3u64);
        if drop {
            self.report.dropped_by_channel += 1;
            return;
        }
        if corrupt && !bytes.is_empty() {
            let bit = bit % (bytes.len() * 8);
            bytes[bit / 8] ^= 1 << (bit % 8);
        }
        let at = now + 1 + if reorder { extra } else { 0 };
        self.schedule(at, Kind::Deliver { to, bytes, origin });
    }

    fn emit(&mut self, now: u64, source: u16) {
        if now + self.s.send_period < self.s.ticks {
            self.schedule(now + self.s.send_period, Kind::Emit { source });
        }
        let node = self.nodes.get_mut(&source).expect("sources are nodes");
        let to = node.next_hop.expect("routes cover every source");
        let Ok(ctr) = node.counters.next(to) else {
            self.report.counter_exhausted += 1;
            return;
        };
        let mut payload = vec![0u8; self.s.payload_len];
        self.payloads.fill_bytes(&mut payload);
        let header = FrameHeader {
            dest: to,
            am: SIM_AM,
            len: 0,
            src: source,
            ctr,
        };
        let (frame, l) = seal_frame(
            &self.sec.mode,
            self.sec.cipher.as_ref(),
            &mut node.counters,
            header,
            &payload,
        )
        .expect("validated scenario seals");
        self.report.ledger_totals += l;
        self.report.honest_originated += 1;
        self.transmit(now, to, frame.encode(), Origin::Honest);
    }

    fn deliver(&mut self, now: u64, to: u16, bytes: Vec<u8>, origin: Origin) {
        if let Adversary::CaptureReplay { delay, count } = self.s.adversary {
            if origin == Origin::Honest && self.captured < count {
                self.captured += 1;
                self.report.frames_sent += 1;
                self.report.adversary_injected += 1;
                self.schedule(
                    now + delay,
                    Kind::Deliver {
                        to,
                        bytes: bytes.clone(),
                        origin: Origin::Injected,
                    },
                );
            }
        }
        let node = self.nodes.get_mut(&to).expect("deliveries target nodes");
        let mut ledger = CallLedger::default();
        let outcome = hop_forward(&self.sec, node, &bytes, &mut ledger);
        self.report.ledger_totals += ledger;
        let injected = origin == Origin::Injected;
        match outcome {
            HopOutcome::Dropped(FrameVerdict::Forged) => self.report.frames_forged += 1,
            HopOutcome::Dropped(FrameVerdict::Replayed) => {
                self.report.frames_replay_flagged += 1;
                if origin == Origin::Honest {
                    self.report.false_positives += 1;
                }
            }
            HopOutcome::Dropped(FrameVerdict::Accept) => unreachable!("accepted frames are not dropped"),
            accepted => {
                self.report.frames_accepted += 1;
                if injected {
                    self.report.false_negatives += 1;
                }
                match accepted {
                    HopOutcome::Forward { to: next, bytes } => {
                        let onward = if origin == Origin::Honest {
                            Origin::Honest
                        } else {
                            if injected {
                                self.report.replays_propagated += 1;
                            }
                            Origin::Propagated
                        };
                        self.transmit(now, next, bytes, onward);
                    }
                    HopOutcome::Delivered { .. } if origin == Origin::Honest => self.report.delivered_end_to_end += 1,
                    HopOutcome::Exhausted => self.report.counter_exhausted += 1,
                    _ => {}
                }
            }
        }
    }
}

fn neighbor_limit(scheme: ReplayScheme, cfg: &ReplayConfig) -> Option<usize> {
    match scheme {
        ReplayScheme::Counter => Some(cfg.max_neighbors.unwrap_or(DEFAULT_COUNTER_NEIGHBORS)),
        ReplayScheme::Digest => Some(cfg.max_neighbors.unwrap_or(DEFAULT_DIGEST_NEIGHBORS)),
        ReplayScheme::Bloom => None,
    }
}

pub fn run_scenario(s: &Scenario) -> Result<SimReport> {
    s.validate()?;
    let routes = s.topology.routes()?;
    let mode = s.policy.mode;
    let cipher = if mode.algorithm.keyed() {
        let name = match s.cipher {
            Some(c) => c,
            None => select_cipher(&mode, s.policy.tier)?,
        };
        Some(make_named(name, &s.key)?)
    } else {
        None
    };

    let mut senders: BTreeMap<u16, usize> = BTreeMap::new();
    for &hop in routes.values() {
        *senders.entry(hop).or_default() += 1;
    }
    let mut nodes = BTreeMap::new();
    for id in s
        .topology
        .nodes()
        .filter(|n| routes.contains_key(n) || *n == s.topology.sink)
    {
        let replay = if mode.replay {
            let limit = neighbor_limit(s.policy.replay_scheme, &s.replay);
            if let Some(limit) = limit {
                if senders.get(&id).copied().unwrap_or(0) > limit {
                    return Err(Error::TableFull(limit));
                }
            }
            Some(ReplayState::new(s.policy.replay_scheme, &s.replay)?)
        } else {
            None
        };
        let role = if id == s.topology.sink {
            Role::Sink
        } else if s.topology.sources.contains(&id) {
            Role::Source
        } else {
            Role::Relay
        };
        nodes.insert(
            id,
            SimNode {
                id,
                role,
                next_hop: routes.get(&id).copied(),
                replay,
                counters: SendCounters::new(),
            },
        );
    }

    let mut payloads = ChaCha8Rng::seed_from_u64(s.seed);
    payloads.set_stream(1);
    let mut sim = Sim {
        s,
        sec: LinkSecurity::new(mode, cipher),
        nodes,
        queue: BinaryHeap::new(),
        seq: 0,
        channel: ChaCha8Rng::seed_from_u64(s.seed),
        payloads,
        captured: 0,
        report: SimReport::default(),
    };
    for (i, &src) in s.topology.sources.iter().enumerate() {
        let start = i as u64 % s.send_period;
        if start < s.ticks {
            sim.schedule(start, Kind::Emit { source: src });
        }
    }
    while let Some(ev) = sim.queue.pop() {
        match ev.kind {
            Kind::Emit { source } => sim.emit(ev.tick, source),
            Kind::Deliver { to, bytes, origin } => sim.deliver(ev.tick, to, bytes, origin),
        }
    }
    sim.report.state_bytes = sim
        .nodes
        .values()
        .filter_map(|n| n.replay.as_ref())
        .map(|r| r.state_bytes() as u64)
        .sum();
    Ok(sim.report)
}
