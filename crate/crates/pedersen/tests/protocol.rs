use num_bigint::BigUint;
use pedersen::transport::{run_memory, run_tcp, CommitterOptions, SessionReport, TransportError};
use pedersen_core::protocol::{ProtocolError, HEADER_LEN};
use pedersen_core::Group;

fn honest(g: &Group, m: u64) -> CommitterOptions {
    CommitterOptions::honest(g.scalar_from_u64(m).unwrap())
}

/// Accept decision recomputed from the raw frames with plain modpow.
fn oracle_accepts(g: &Group, frames: &SessionReport) -> bool {
    let payload = |i: usize| &frames.frames[i].bytes[HEADER_LEN..];
    let p = g.modulus();
    let h = BigUint::from_bytes_be(payload(0));
    let c = BigUint::from_bytes_be(payload(1));
    let (m, d) = payload(2).split_at(g.scalar_width());
    let (m, d) = (BigUint::from_bytes_be(m), BigUint::from_bytes_be(d));
    let gen = g.generator().value().clone();
    gen.modpow(&d, p) * h.modpow(&m, p) % p == c
}

#[test]
fn honest_sessions_accept_over_both_transports() {
    for g in [Group::toy(), Group::large()] {
        for seed in 0..6 {
            let opts = honest(&g, seed * 3 % 11);
            let (r, c) = run_memory(&g, seed, &opts);
            let (r, c) = (r.unwrap(), c.unwrap());
            assert!(r.accepted && c.accepted);
            assert!(oracle_accepts(&g, &r));
            let (tr, tc) = run_tcp(&g, seed, &opts).unwrap();
            assert_eq!(tr.unwrap(), r, "receiver frames differ, seed {seed}");
            assert_eq!(tc.unwrap(), c, "committer frames differ, seed {seed}");
        }
    }
}

#[test]
fn setup_frame_example() {
    // Toy elements encode in one byte.
    let g = Group::toy();
    let (r, _) = run_memory(&g, 0, &honest(&g, 2));
    let setup = &r.unwrap().frames[0].bytes;
    assert_eq!(&setup[..HEADER_LEN], &[0x01, 0, 0, 0, 1]);
    assert_eq!(setup.len(), 6);
}

#[test]
fn every_open_bit_flip_is_caught_on_large() {
    let g = Group::large();
    let bits = 2 * g.scalar_width() * 8;
    for bit in 0..bits {
        let mut opts = honest(&g, 12345);
        opts.flip_open_bit = Some(bit);
        let (r, _) = run_memory(&g, 77 + bit as u64, &opts);
        match r {
            Ok(report) => {
                assert!(!report.accepted, "bit {bit} accepted");
                assert!(!oracle_accepts(&g, &report));
            }
            Err(e) => {
                assert!(matches!(e.error, TransportError::Protocol(ProtocolError::DecodeOutOfRange)), "bit {bit}: {e}")
            }
        }
    }
}

// On the toy group a receiver whose key exponent is 0 publishes h = 1, and
// then any message opens the commitment. Every other key catches every flip.
#[test]
fn toy_flips_only_pass_under_the_identity_key() {
    let g = Group::toy();
    let mut identity_key_seen = false;
    for seed in 0..40u64 {
        for bit in 0..16 {
            let mut opts = honest(&g, seed % 11);
            opts.flip_open_bit = Some(bit);
            let Ok(report) = run_memory(&g, seed, &opts).0 else { continue };
            assert_eq!(report.accepted, oracle_accepts(&g, &report));
            let h = report.frames[0].bytes[HEADER_LEN];
            identity_key_seen |= h == 1;
            if report.accepted {
                assert_eq!(h, 1, "seed {seed} bit {bit}");
                assert!(bit < 8, "a flipped opening key never verifies");
            }
        }
    }
    assert!(identity_key_seen, "no seed in range produced h = 1");
}
