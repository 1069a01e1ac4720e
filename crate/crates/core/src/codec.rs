//! Payload framing: Blowfish-CBC encryption with a passphrase-derived key,
//! the fixed 240-bit stego header, CRC-32 integrity, and bit packing.

use blowfish::Blowfish;
use cipher::block_padding::Pkcs7;
use cipher::{BlockCipherEncrypt, BlockModeDecrypt, BlockModeEncrypt, KeyInit, KeyIvInit};
use rand::RngCore;
use sha2::{Digest, Sha256};

use crate::error::CodecError;

/// Header magic, "HFAS".
pub const MAGIC: [u8; 4] = *b"HFAS";
pub const VERSION: u8 = 0x01;
/// Permutation generator id: affine coprime scan.
pub const MODE_AFFINE_SCAN: u8 = 0x01;

/// Serialized header size.
pub const HEADER_BYTES: usize = 30;
pub const HEADER_BITS: usize = HEADER_BYTES * 8;

/// Blowfish block size.
pub const BLOCK_BYTES: usize = 8;
/// Derived key size: 128 bits.
pub const KEY_BYTES: usize = 16;

/// Fixed-layout metadata block embedded at the first 240 LSB slots.
///
/// Layout (big-endian multi-byte fields):
/// magic(4) version(1) mode(1) payload_len(4) scan_start(4) scan_stride(4)
/// iv(8) crc32(4) = 30 bytes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StegoHeader {
    pub mode: u8,
    /// Ciphertext byte count.
    pub payload_len: u32,
    /// Slot index s of the affine scan.
    pub scan_start: u32,
    /// Slot stride t of the affine scan.
    pub scan_stride: u32,
    pub iv: [u8; 8],
    /// CRC-32/ISO-HDLC of the ciphertext.
    pub crc32: u32,
}

impl StegoHeader {
    pub fn to_bytes(&self) -> [u8; HEADER_BYTES] {
        let mut out = [0u8; HEADER_BYTES];
        out[0..4].copy_from_slice(&MAGIC);
        out[4] = VERSION;
        out[5] = self.mode;
        out[6..10].copy_from_slice(&self.payload_len.to_be_bytes());
        out[10..14].copy_from_slice(&self.scan_start.to_be_bytes());
        out[14..18].copy_from_slice(&self.scan_stride.to_be_bytes());
        out[18..26].copy_from_slice(&self.iv);
        out[26..30].copy_from_slice(&self.crc32.to_be_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, CodecError> {
        if bytes.len() != HEADER_BYTES {
            return Err(CodecError::BadHeader("wrong header length"));
        }
        if bytes[0..4] != MAGIC {
            return Err(CodecError::BadHeader("magic mismatch"));
        }
        if bytes[4] != VERSION {
            return Err(CodecError::BadHeader("unsupported version"));
        }
        if bytes[5] != MODE_AFFINE_SCAN {
            return Err(CodecError::BadHeader("unknown permutation mode"));
        }
        let payload_len = u32::from_be_bytes(bytes[6..10].try_into().unwrap());
        if payload_len == 0 {
            return Err(CodecError::BadHeader("zero payload length"));
        }
        let mut iv = [0u8; 8];
        iv.copy_from_slice(&bytes[18..26]);
        Ok(Self {
            mode: bytes[5],
            payload_len,
            scan_start: u32::from_be_bytes(bytes[10..14].try_into().unwrap()),
            scan_stride: u32::from_be_bytes(bytes[14..18].try_into().unwrap()),
            iv,
            crc32: u32::from_be_bytes(bytes[26..30].try_into().unwrap()),
        })
    }

    pub fn to_bits(&self) -> Vec<u8> {
        bytes_to_bits(&self.to_bytes())
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self, CodecError> {
        Self::from_bytes(&bits_to_bytes(bits)?)
    }
}

/// Encrypted payload plus the material needed to verify and decrypt it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CipherPayload {
    pub ciphertext: Vec<u8>,
    pub iv: [u8; 8],
    pub crc32: u32,
}

/// 128-bit key: the first 16 bytes of SHA-256 over the passphrase.
pub fn derive_key(passphrase: &str) -> [u8; KEY_BYTES] {
    let digest = Sha256::digest(passphrase.as_bytes());
    digest[..KEY_BYTES].try_into().unwrap()
}

/// Blowfish-CBC with PKCS#7 padding and a caller-seeded random IV. The CRC
/// covers the ciphertext so integrity is checkable before decryption.
pub fn encrypt_payload(
    plaintext: &[u8],
    passphrase: &str,
    rng: &mut dyn RngCore,
) -> Result<CipherPayload, CodecError> {
    if plaintext.is_empty() {
        return Err(CodecError::EmptyPlaintext);
    }
    if passphrase.is_empty() {
        return Err(CodecError::EmptyPassphrase);
    }
    let key = derive_key(passphrase);
    let mut iv = [0u8; 8];
    rng.fill_bytes(&mut iv);
    let enc = cbc::Encryptor::<Blowfish>::new_from_slices(&key, &iv)
        .expect("fixed key and iv sizes");
    let ciphertext = enc.encrypt_padded_vec::<Pkcs7>(plaintext);
    let crc32 = crc32fast::hash(&ciphertext);
    Ok(CipherPayload {
        ciphertext,
        iv,
        crc32,
    })
}

/// CRC check first (channel corruption), then decrypt; a padding failure
/// means the key was wrong.
pub fn decrypt_payload(cp: &CipherPayload, passphrase: &str) -> Result<Vec<u8>, CodecError> {
    if passphrase.is_empty() {
        return Err(CodecError::EmptyPassphrase);
    }
    if crc32fast::hash(&cp.ciphertext) != cp.crc32 {
        return Err(CodecError::CrcMismatch);
    }
    if cp.ciphertext.is_empty() || cp.ciphertext.len() % BLOCK_BYTES != 0 {
        return Err(CodecError::BadHeader("ciphertext length not a block multiple"));
    }
    let key = derive_key(passphrase);
    let dec = cbc::Decryptor::<Blowfish>::new_from_slices(&key, &cp.iv)
        .expect("fixed key and iv sizes");
    dec.decrypt_padded_vec::<Pkcs7>(&cp.ciphertext)
        .map_err(|_| CodecError::WrongKey)
}

/// Raw single-block Blowfish encryption. Exposed for known-answer checks
/// against the published reference vectors.
pub fn encrypt_block(key: &[u8], block: [u8; BLOCK_BYTES]) -> [u8; BLOCK_BYTES] {
    let cipher = <Blowfish>::new_from_slice(key).expect("valid blowfish key length");
    let mut b = cipher::Block::<Blowfish>::from(block);
    cipher.encrypt_block(&mut b);
    b.into()
}

/// MSB-first bit expansion; each output element is 0 or 1.
pub fn bytes_to_bits(data: &[u8]) -> Vec<u8> {
    let mut bits = Vec::with_capacity(data.len() * 8);
    for byte in data {
        for shift in (0..8).rev() {
            bits.push((byte >> shift) & 1);
        }
    }
    bits
}

/// Inverse of [`bytes_to_bits`]; the input length must be a multiple of 8.
pub fn bits_to_bytes(bits: &[u8]) -> Result<Vec<u8>, CodecError> {
    if bits.len() % 8 != 0 {
        return Err(CodecError::RaggedBits(bits.len()));
    }
    Ok(bits
        .chunks_exact(8)
        .map(|chunk| chunk.iter().fold(0u8, |acc, b| (acc << 1) | (b & 1)))
        .collect())
}
