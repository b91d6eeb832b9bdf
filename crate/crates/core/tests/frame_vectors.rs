//! Golden secured frames (see `oracles/modes_ref.py`), plus codec fuzzing.

use flexisec::make_cipher;
use flexisec::packet::{
    open_frame, seal_frame, FrameHeader, FrameVerdict, SecuredFrame, SendCounters, HEADER_LEN, MAX_PAYLOAD,
};
use flexisec::policy::{FlexiMode, MODES};
use flexisec::replay::{ReplayConfig, ReplayScheme, ReplayState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn golden_frames() {
    let mut seen = 0;
    for line in include_str!("oracles/mode_vectors.txt")
        .lines()
        .filter(|l| l.starts_with("frame "))
    {
        let f: Vec<&str> = line.split_whitespace().collect();
        let mode = FlexiMode::by_id(f[1].parse().unwrap()).unwrap();
        let c = make_cipher("aes_speed", &hex::decode(f[2]).unwrap()).unwrap();
        let header = FrameHeader {
            dest: f[3].parse().unwrap(),
            am: f[4].parse().unwrap(),
            len: 0,
            src: f[5].parse().unwrap(),
            ctr: f[6].parse().unwrap(),
        };
        let payload = if f[7] == "-" {
            Vec::new()
        } else {
            hex::decode(f[7]).unwrap()
        };
        let (frame, _) = seal_frame(&mode, Some(&c), &mut SendCounters::new(), header, &payload).unwrap();
        assert_eq!(frame.to_hex(), f[8], "{}", mode.name);

        let mut st = ReplayState::new(ReplayScheme::Counter, &ReplayConfig::default()).unwrap();
        let opened = open_frame(&mode, Some(&c), Some(&mut st), &hex::decode(f[8]).unwrap()).unwrap();
        assert_eq!(opened.verdict, FrameVerdict::Accept);
        assert_eq!(opened.payload.unwrap(), payload);
        seen += 1;
    }
    assert_eq!(seen, 32);
}

fn random_frame(rng: &mut ChaCha8Rng, mac_len: usize, digest: bool) -> SecuredFrame {
    let len = rng.gen_range(0..=MAX_PAYLOAD);
    let mut payload = vec![0u8; len];
    rng.fill(&mut payload[..]);
    let mut mac = vec![0u8; mac_len];
    rng.fill(&mut mac[..]);
    SecuredFrame {
        header: FrameHeader {
            dest: rng.gen(),
            am: rng.gen(),
            len: len as u8,
            src: rng.gen(),
            ctr: rng.gen(),
        },
        payload,
        mac,
        digest: digest.then(|| rng.gen()),
    }
}

#[test]
fn codec_round_trip_fuzz() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..10_000 {
        let m = MODES[i % MODES.len()];
        let (mac_len, digest) = if m.tag_len == 20 { (0, true) } else { (m.tag_len, false) };
        let f = random_frame(&mut rng, mac_len, digest);
        let bytes = f.encode();
        assert_eq!(bytes.len(), HEADER_LEN + f.payload.len() + m.tag_len);
        assert_eq!(SecuredFrame::decode_for(&bytes, &m).unwrap(), f);
    }
}

#[test]
fn sixty_four_bit_ciphers_seal_and_open() {
    for name in ["xxtea_opt", "skipjack", "tea", "xtea", "xxtea", "rc6", "aes_size"] {
        let spec = name.parse::<flexisec::CipherName>().unwrap().spec();
        let c = make_cipher(name, &vec![9; spec.key_len()]).unwrap();
        for m in &MODES[2..] {
            let mut sc = SendCounters::new();
            let h = FrameHeader {
                dest: 1,
                src: 2,
                ctr: 1,
                ..FrameHeader::default()
            };
            let (f, _) = seal_frame(m, Some(&c), &mut sc, h, b"twenty-nine bytes of payload!").unwrap();
            let mut st = ReplayState::new(ReplayScheme::Digest, &ReplayConfig::default()).unwrap();
            let o = open_frame(m, Some(&c), Some(&mut st), &f.encode()).unwrap();
            assert_eq!(o.verdict, FrameVerdict::Accept, "{name} {}", m.name);
        }
    }
}
