//! Property tests for the structural invariants: bit packing and header
//! serialization are inverses, encryption roundtrips under its own key, and
//! the coprime scan never reuses a slot.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use stegafly_core::codec::{
    bits_to_bytes, bytes_to_bits, decrypt_payload, encrypt_payload, StegoHeader,
    MODE_AFFINE_SCAN,
};
use stegafly_core::metrics::{mse, psnr_from_mse, ssim};
use stegafly_core::stego::{candidate_to_permutation, PixelPermutation};
use stegafly_core::ImageBuffer;

proptest! {
    #[test]
    fn bit_packing_roundtrips(data in proptest::collection::vec(any::<u8>(), 0..256)) {
        let bits = bytes_to_bits(&data);
        prop_assert_eq!(bits.len(), data.len() * 8);
        prop_assert!(bits.iter().all(|b| *b <= 1));
        prop_assert_eq!(bits_to_bytes(&bits).unwrap(), data);
    }

    #[test]
    fn ragged_bit_streams_are_rejected(len in 1usize..64) {
        prop_assume!(len % 8 != 0);
        prop_assert!(bits_to_bytes(&vec![0u8; len]).is_err());
    }

    #[test]
    fn header_serialization_roundtrips(
        payload_len in 1u32..,
        scan_start: u32,
        scan_stride: u32,
        iv: [u8; 8],
        crc32: u32,
    ) {
        let header = StegoHeader {
            mode: MODE_AFFINE_SCAN,
            payload_len,
            scan_start,
            scan_stride,
            iv,
            crc32,
        };
        prop_assert_eq!(StegoHeader::from_bytes(&header.to_bytes()).unwrap(), header);
    }

    #[test]
    fn encryption_roundtrips(
        plaintext in proptest::collection::vec(any::<u8>(), 1..512),
        passphrase in "[ -~]{1,32}",
        seed: u64,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sealed = encrypt_payload(&plaintext, &passphrase, &mut rng).unwrap();
        // PKCS#7 always pads, so the ciphertext strictly outgrows the input
        prop_assert!(sealed.ciphertext.len() > plaintext.len());
        prop_assert_eq!(sealed.ciphertext.len() % 8, 0);
        prop_assert_eq!(decrypt_payload(&sealed, &passphrase).unwrap(), plaintext);
    }

    #[test]
    fn scan_permutation_is_injective(
        x0 in 0.0f64..1.0,
        x1 in 0.0f64..1.0,
        eligible in 1usize..4000,
    ) {
        let length = eligible.min(177);
        let perm = candidate_to_permutation(&[x0, x1], eligible, length);
        let mut seen = vec![false; eligible + stegafly_core::stego::HEADER_SLOTS];
        for i in 0..length {
            let slot = perm.slot(i);
            prop_assert!(slot >= stegafly_core::stego::HEADER_SLOTS);
            prop_assert!(!seen[slot], "slot {} reused", slot);
            seen[slot] = true;
        }
    }

    #[test]
    fn full_cycle_covers_every_eligible_slot(start: u64, stride_seed: u64, eligible in 2usize..600) {
        // any coprime stride visits each slot exactly once per cycle
        let mut stride = (stride_seed % eligible as u64).max(1);
        while gcd(stride, eligible as u64) != 1 {
            stride += 1;
        }
        let perm = PixelPermutation::new(start, stride, eligible, eligible);
        let mut seen = vec![false; eligible];
        for i in 0..eligible {
            let slot = perm.slot(i) - stegafly_core::stego::HEADER_SLOTS;
            prop_assert!(!seen[slot]);
            seen[slot] = true;
        }
    }

    #[test]
    fn psnr_is_monotone_in_mse(a in 0.0f64..1000.0, b in 0.0f64..1000.0) {
        prop_assume!(a < b);
        prop_assert!(psnr_from_mse(a) > psnr_from_mse(b));
    }

    #[test]
    fn metric_bounds_hold_on_random_pairs(seed_a: u64, seed_b: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed_a);
        let a = random_image(&mut rng, 16, 16);
        let mut rng = ChaCha8Rng::seed_from_u64(seed_b);
        let b = random_image(&mut rng, 16, 16);
        let m = mse(&a, &b).unwrap();
        prop_assert!((0.0..=255.0f64 * 255.0).contains(&m));
        let s = ssim(&a, &b, 8).unwrap();
        prop_assert!((-1.0..=1.0).contains(&s));
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn random_image(rng: &mut ChaCha8Rng, width: usize, height: usize) -> ImageBuffer {
    use rand::RngCore;
    let mut data = vec![0u8; width * height * 3];
    rng.fill_bytes(&mut data);
    ImageBuffer::new(width, height, data).unwrap()
}
