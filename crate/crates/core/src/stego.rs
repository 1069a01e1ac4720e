//! Embedding and extraction: slot space, affine coprime scan permutations,
//! the placement search, and LSB read/write.
//!
//! Slot i is the least significant bit of channel sample i in row-major
//! R,G,B order. The first 240 slots carry the header; the payload lives in
//! the remaining eligible slots along a permutation `240 + (s + i*t) mod E`
//! with `gcd(t, E) = 1`.

use std::cell::RefCell;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::buffer::ImageBuffer;
use crate::codec::{
    self, bits_to_bytes, bytes_to_bits, CipherPayload, StegoHeader, HEADER_BITS, MODE_AFFINE_SCAN,
};
use crate::error::StegoError;
use crate::metrics::{self, QualityReport, DEFAULT_WINDOW};
use crate::optimizer::{
    hfa_run_seeded, HfaConfig, Objective, OptimizationTrace, Orientation,
};

/// Number of LSB slots reserved for the header.
pub const HEADER_SLOTS: usize = HEADER_BITS;

/// Worst-case codec framing overhead in bytes (one padding block plus the
/// partial block the payload may spill into).
pub const FRAMING_OVERHEAD_BYTES: usize = 16;

/// The LSB slot layout of a cover image.
#[derive(Debug, Clone, Copy)]
pub struct SlotSpace {
    total: usize,
}

impl SlotSpace {
    pub fn new(cover: &ImageBuffer) -> Result<Self, StegoError> {
        let total = cover.total_samples();
        if total < HEADER_SLOTS {
            return Err(StegoError::CoverTooSmall {
                slots: total,
                header: HEADER_SLOTS,
            });
        }
        Ok(Self { total })
    }

    pub fn total_slots(&self) -> usize {
        self.total
    }

    /// Slots available for payload bits.
    pub fn eligible_slots(&self) -> usize {
        self.total - HEADER_SLOTS
    }
}

/// Maximum payload file size in bytes for a cover, after header slots and
/// codec framing overhead.
pub fn capacity(cover: &ImageBuffer) -> Result<usize, StegoError> {
    let space = SlotSpace::new(cover)?;
    Ok((space.eligible_slots() / 8).saturating_sub(FRAMING_OVERHEAD_BYTES))
}

/// An injective ordering of eligible slots generated from (start, stride).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PixelPermutation {
    pub start: u64,
    pub stride: u64,
    pub length: usize,
    eligible: u64,
}

impl PixelPermutation {
    pub fn new(start: u64, stride: u64, length: usize, eligible: usize) -> Self {
        Self {
            start,
            stride,
            length,
            eligible: eligible as u64,
        }
    }

    /// Absolute slot index of the i-th payload bit.
    pub fn slot(&self, i: usize) -> usize {
        HEADER_SLOTS + ((self.start + i as u64 * self.stride) % self.eligible) as usize
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Maps an optimizer candidate in [0,1]^2 to a concrete scan: `s` indexes
/// into the eligible region, `t` is the smallest coprime stride at or above
/// the candidate's raw stride.
pub fn candidate_to_permutation(x: &[f64], eligible: usize, length: usize) -> PixelPermutation {
    let e = eligible as u64;
    let raw_s = (x[0].clamp(0.0, 1.0) * eligible as f64).floor() as u64;
    let start = raw_s.min(e.saturating_sub(1));
    let raw_t = (x[1].clamp(0.0, 1.0) * eligible as f64 / 2.0).floor() as u64;
    let mut stride = raw_t.max(1);
    while gcd(stride, e) != 1 {
        stride += 1;
    }
    PixelPermutation::new(start, stride, length, eligible)
}

/// Copies the cover and sets the LSB of slot `perm.slot(i)` to `bits[i]`.
pub fn embed_at(
    cover: &ImageBuffer,
    perm: &PixelPermutation,
    bits: &[u8],
) -> Result<ImageBuffer, StegoError> {
    if bits.len() != perm.length {
        return Err(StegoError::BitCountMismatch {
            expected: perm.length,
            got: bits.len(),
        });
    }
    let mut out = cover.clone();
    write_bits(&mut out, perm, bits);
    Ok(out)
}

fn write_bits(img: &mut ImageBuffer, perm: &PixelPermutation, bits: &[u8]) {
    let data = img.data_mut();
    for (i, bit) in bits.iter().enumerate() {
        let slot = perm.slot(i);
        data[slot] = (data[slot] & !1) | (bit & 1);
    }
}

fn write_header_bits(img: &mut ImageBuffer, bits: &[u8]) {
    let data = img.data_mut();
    for (slot, bit) in bits.iter().enumerate() {
        data[slot] = (data[slot] & !1) | (bit & 1);
    }
}

fn read_lsb(img: &ImageBuffer, slot: usize) -> u8 {
    img.data()[slot] & 1
}

/// Everything `embed` needs. `optimizer` must use dimension 2 over [0,1]
/// bounds; `EmbedRequest::new` sets that up with the default budget
/// (population 40, 200 iterations).
#[derive(Debug, Clone)]
pub struct EmbedRequest {
    pub cover: ImageBuffer,
    pub payload: Vec<u8>,
    pub passphrase: String,
    pub optimizer: HfaConfig,
}

impl EmbedRequest {
    pub fn new(cover: ImageBuffer, payload: Vec<u8>, passphrase: String, seed: u64) -> Self {
        let mut optimizer = HfaConfig::new(2, vec![(0.0, 1.0); 2], seed);
        optimizer.max_iterations = 200;
        optimizer.orientation = Orientation::Maximize;
        Self {
            cover,
            payload,
            passphrase,
            optimizer,
        }
    }
}

/// Result of an embedding: the stego image, its quality against the cover,
/// the optimizer trace, and the fitness of the sequential-scan baseline that
/// was planted in the initial population.
#[derive(Debug, Clone)]
pub struct EmbedOutcome {
    pub stego: ImageBuffer,
    pub report: QualityReport,
    pub trace: OptimizationTrace,
    pub baseline_fitness: f64,
    pub header: StegoHeader,
}

thread_local! {
    static SCRATCH: RefCell<Option<ImageBuffer>> = const { RefCell::new(None) };
}

/// Placement objective: fitness Z of embedding the bits along the candidate
/// scan. Reuses a per-thread scratch image; behaviorally each evaluation is
/// on a fresh copy of the cover.
struct PlacementObjective<'a> {
    cover: &'a ImageBuffer,
    bits: &'a [u8],
    eligible: usize,
    window: usize,
}

impl Objective for PlacementObjective<'_> {
    fn evaluate(&self, x: &[f64]) -> f64 {
        let perm = candidate_to_permutation(x, self.eligible, self.bits.len());
        SCRATCH.with(|cell| {
            let mut slot = cell.borrow_mut();
            let scratch = match slot.as_mut() {
                Some(s) if s.same_shape(self.cover) => {
                    s.data_mut().copy_from_slice(self.cover.data());
                    s
                }
                _ => {
                    *slot = Some(self.cover.clone());
                    slot.as_mut().unwrap()
                }
            };
            write_bits(scratch, &perm, self.bits);
            metrics::fitness_z_windowed(self.cover, scratch, self.window)
                .unwrap_or(f64::NEG_INFINITY)
        })
    }
}

/// Runs the full embedding pipeline: encrypt, search placements, write
/// header and payload LSBs, score.
pub fn embed(req: &EmbedRequest) -> Result<EmbedOutcome, StegoError> {
    let cover = &req.cover;
    let space = SlotSpace::new(cover)?;
    if cover.width() < 2 || cover.height() < 2 {
        return Err(StegoError::CoverTooSmall {
            slots: space.total_slots(),
            header: HEADER_SLOTS,
        });
    }
    let available = capacity(cover)?;

    let mut rng = ChaCha8Rng::seed_from_u64(req.optimizer.rng_seed);
    let cp = codec::encrypt_payload(&req.payload, &req.passphrase, &mut rng)?;
    let bits = bytes_to_bits(&cp.ciphertext);
    if bits.len() > space.eligible_slots() {
        return Err(StegoError::Capacity {
            needed: req.payload.len(),
            available,
        });
    }

    let window = DEFAULT_WINDOW.min(cover.width()).min(cover.height());
    let objective = PlacementObjective {
        cover,
        bits: &bits,
        eligible: space.eligible_slots(),
        window,
    };

    let mut config = req.optimizer.clone();
    config.dimension = 2;
    config.bounds = vec![(0.0, 1.0); 2];
    config.orientation = Orientation::Maximize;
    config.rng_seed = rng.gen();

    // The sequential scan (s=0, t=1) is planted in the initial population so
    // the search can never return a worse placement than the naive one.
    let baseline = vec![0.0, 0.0];
    let baseline_fitness = objective.evaluate(&baseline);
    let trace = hfa_run_seeded(&config, &objective, std::slice::from_ref(&baseline))?;

    let perm = candidate_to_permutation(
        &trace.best_solution.position,
        space.eligible_slots(),
        bits.len(),
    );
    let header = StegoHeader {
        mode: MODE_AFFINE_SCAN,
        payload_len: cp.ciphertext.len() as u32,
        scan_start: perm.start as u32,
        scan_stride: perm.stride as u32,
        iv: cp.iv,
        crc32: cp.crc32,
    };
    let mut stego = cover.clone();
    write_header_bits(&mut stego, &header.to_bits());
    write_bits(&mut stego, &perm, &bits);
    let report = QualityReport::compute_windowed(cover, &stego, window)?;
    Ok(EmbedOutcome {
        stego,
        report,
        trace,
        baseline_fitness,
        header,
    })
}

/// Reads the header from the fixed slots, regenerates the permutation, and
/// recovers the payload.
pub fn extract(stego: &ImageBuffer, passphrase: &str) -> Result<Vec<u8>, StegoError> {
    let space = SlotSpace::new(stego).map_err(|_| StegoError::NotStego("image too small"))?;
    let header_bits: Vec<u8> = (0..HEADER_SLOTS).map(|s| read_lsb(stego, s)).collect();
    let header = StegoHeader::from_bits(&header_bits)
        .map_err(|_| StegoError::NotStego("no valid header"))?;

    let eligible = space.eligible_slots();
    let bit_count = header.payload_len as usize * 8;
    if bit_count > eligible {
        return Err(StegoError::NotStego("declared payload exceeds capacity"));
    }
    if header.scan_stride == 0
        || header.scan_start as usize >= eligible
        || gcd(header.scan_stride as u64, eligible as u64) != 1
    {
        return Err(StegoError::NotStego("invalid scan parameters"));
    }

    let perm = PixelPermutation::new(
        header.scan_start as u64,
        header.scan_stride as u64,
        bit_count,
        eligible,
    );
    let bits: Vec<u8> = (0..bit_count).map(|i| read_lsb(stego, perm.slot(i))).collect();
    let cp = CipherPayload {
        ciphertext: bits_to_bytes(&bits)?,
        iv: header.iv,
        crc32: header.crc32,
    };
    Ok(codec::decrypt_payload(&cp, passphrase)?)
}
