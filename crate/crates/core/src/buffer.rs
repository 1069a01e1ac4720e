//! 8-bit RGB pixel buffers and lossless file I/O.

use std::path::Path;

use crate::error::StegoError;

/// Number of channels per pixel (R, G, B).
pub const CHANNELS: usize = 3;

/// Peak channel value for 8-bit samples.
pub const MAX_VALUE: u8 = 255;

/// A width x height x 3 matrix of 8-bit channel values, row-major,
/// channel order R, G, B within each pixel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageBuffer {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl ImageBuffer {
    /// Builds a buffer from raw row-major RGB bytes.
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self, StegoError> {
        if data.len() != width * height * CHANNELS {
            return Err(StegoError::ShapeMismatch {
                expected: width * height * CHANNELS,
                got: data.len(),
            });
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    /// All-zero (black) image, handy for tests and scratch space.
    pub fn zeroed(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            data: vec![0; width * height * CHANNELS],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Total channel sample count m*n*3 (one LSB slot per sample).
    pub fn total_samples(&self) -> usize {
        self.data.len()
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [u8] {
        &mut self.data
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.width == other.width && self.height == other.height
    }

    /// Sample value at (x, y, channel).
    pub fn sample(&self, x: usize, y: usize, channel: usize) -> u8 {
        self.data[(y * self.width + x) * CHANNELS + channel]
    }

    /// Reads a lossless cover image (PNG or BMP) and converts it to 8-bit RGB.
    pub fn load(path: &Path) -> Result<Self, StegoError> {
        let ext = path
            .extension()
            .and_then(|e| e.to_str())
            .map(|e| e.to_ascii_lowercase())
            .unwrap_or_default();
        if ext != "png" && ext != "bmp" {
            return Err(StegoError::LossyFormat(ext));
        }
        let img = image::open(path)?.into_rgb8();
        let (w, h) = (img.width() as usize, img.height() as usize);
        Self::new(w, h, img.into_raw())
    }

    /// Writes the buffer as a PNG. LSB payloads do not survive lossy
    /// compression, so PNG is the only supported output container.
    pub fn save_png(&self, path: &Path) -> Result<(), StegoError> {
        let ext = path
            .extension()
            .and_then(|e| e.to_str())
            .map(|e| e.to_ascii_lowercase())
            .unwrap_or_default();
        if ext != "png" {
            return Err(StegoError::LossyFormat(ext));
        }
        let img: image::RgbImage = image::ImageBuffer::from_raw(
            self.width as u32,
            self.height as u32,
            self.data.clone(),
        )
        .expect("buffer length matches dimensions");
        img.save_with_format(path, image::ImageFormat::Png)?;
        Ok(())
    }
}
