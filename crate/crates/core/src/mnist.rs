//! IDX file ingestion and binarization.
//!
//! The IDX container is parsed bit-exactly: 4-byte big-endian magic
//! (0x00000803 for images, 0x00000801 for labels), big-endian dimension
//! sizes, then an unsigned-byte payload. Images are binarized with a
//! threshold and no other preprocessing.

use std::fs;
use std::path::Path;

use crate::crossbar::InputVector;
use crate::error::{Error, Result};

pub const IMAGES_MAGIC: u32 = 0x0000_0803;
pub const LABELS_MAGIC: u32 = 0x0000_0801;

/// Default binarization threshold (config-overridable).
pub const DEFAULT_BINARIZE_THRESHOLD: u8 = 128;

/// Raw grayscale images straight out of an IDX file, row-major.
#[derive(Debug, Clone)]
pub struct RawImages {
    count: usize,
    rows: usize,
    cols: usize,
    pixels: Vec<u8>,
}

impl RawImages {
    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn image_len(&self) -> usize {
        self.rows * self.cols
    }

    pub fn image(&self, idx: usize) -> &[u8] {
        let n = self.image_len();
        &self.pixels[idx * n..(idx + 1) * n]
    }
}

/// Big-endian u32 reader that reports the failing offset by name.
struct IdxReader<'a> {
    path: &'a Path,
    bytes: &'a [u8],
    offset: usize,
}

impl<'a> IdxReader<'a> {
    fn err(&self, offset: u64, what: String) -> Error {
        Error::Format {
            path: self.path.display().to_string(),
            offset,
            what,
        }
    }

    fn read_u32(&mut self, what: &str) -> Result<u32> {
        let at = self.offset;
        let chunk: [u8; 4] = self
            .bytes
            .get(at..at + 4)
            .and_then(|s| s.try_into().ok())
            .ok_or_else(|| self.err(at as u64, format!("file truncated reading {what}")))?;
        self.offset += 4;
        Ok(u32::from_be_bytes(chunk))
    }

    fn expect_magic(&mut self, expected: u32) -> Result<()> {
        let got = self.read_u32("magic number")?;
        if got != expected {
            return Err(self.err(
                0,
                format!("bad magic number 0x{got:08x}, expected 0x{expected:08x}"),
            ));
        }
        Ok(())
    }

    fn payload(&self, count: usize, what: &str) -> Result<&'a [u8]> {
        let at = self.offset;
        let slice = self.bytes.get(at..at + count).ok_or_else(|| {
            let missing = at + count - self.bytes.len();
            self.err(
                self.bytes.len() as u64,
                format!("file truncated: {what} payload short by {missing} bytes"),
            )
        })?;
        if self.bytes.len() > at + count {
            return Err(self.err(
                (at + count) as u64,
                format!(
                    "{} trailing bytes after the {what} payload",
                    self.bytes.len() - at - count
                ),
            ));
        }
        Ok(slice)
    }
}

/// Load an IDX image file (magic 0x00000803).
pub fn load_idx_images(path: &Path) -> Result<RawImages> {
    let bytes = fs::read(path)?;
    let mut r = IdxReader {
        path,
        bytes: &bytes,
        offset: 0,
    };
    r.expect_magic(IMAGES_MAGIC)?;
    let count = r.read_u32("image count")? as usize;
    let rows = r.read_u32("row count")? as usize;
    let cols = r.read_u32("column count")? as usize;
    let total = count
        .checked_mul(rows)
        .and_then(|n| n.checked_mul(cols))
        .ok_or_else(|| Error::Format {
            path: path.display().to_string(),
            offset: 4,
            what: format!("dimensions {count} x {rows} x {cols} overflow"),
        })?;
    let pixels = r.payload(total, "pixel")?.to_vec();
    Ok(RawImages {
        count,
        rows,
        cols,
        pixels,
    })
}

/// Load an IDX label file (magic 0x00000801). Every label must be a digit
/// class in 0..=9.
pub fn load_idx_labels(path: &Path) -> Result<Vec<u8>> {
    let bytes = fs::read(path)?;
    let mut r = IdxReader {
        path,
        bytes: &bytes,
        offset: 0,
    };
    r.expect_magic(LABELS_MAGIC)?;
    let count = r.read_u32("label count")? as usize;
    let labels = r.payload(count, "label")?;
    if let Some(bad) = labels.iter().position(|&l| l > 9) {
        return Err(r.err(
            (8 + bad) as u64,
            format!("label {} outside digit range 0..=9", labels[bad]),
        ));
    }
    Ok(labels.to_vec())
}

/// Threshold a grayscale image into a binary input pattern. A pixel maps
/// to 1 iff its value is >= `threshold`.
pub fn binarize(img: &[u8], threshold: u8) -> InputVector {
    InputVector::new(img.iter().map(|&p| p >= threshold).collect())
}

/// A binarized image corpus with labels.
#[derive(Debug, Clone)]
pub struct Dataset {
    images: Vec<InputVector>,
    labels: Vec<u8>,
    rows: usize,
    cols: usize,
}

impl Dataset {
    pub fn new(images: Vec<InputVector>, labels: Vec<u8>, rows: usize, cols: usize) -> Result<Self> {
        if images.len() != labels.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} images but {} labels",
                images.len(),
                labels.len()
            )));
        }
        if images.iter().any(|x| x.len() != rows * cols) {
            return Err(Error::ShapeMismatch(format!(
                "every image must have {} pixels",
                rows * cols
            )));
        }
        Ok(Self {
            images,
            labels,
            rows,
            cols,
        })
    }

    /// Load and binarize an IDX image/label file pair.
    pub fn from_idx_files(images_path: &Path, labels_path: &Path, threshold: u8) -> Result<Self> {
        let raw = load_idx_images(images_path)?;
        let labels = load_idx_labels(labels_path)?;
        if raw.len() != labels.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} images in {} but {} labels in {}",
                raw.len(),
                images_path.display(),
                labels.len(),
                labels_path.display()
            )));
        }
        let images = (0..raw.len())
            .map(|i| binarize(raw.image(i), threshold))
            .collect();
        Ok(Self {
            images,
            labels,
            rows: raw.rows(),
            cols: raw.cols(),
        })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn image_len(&self) -> usize {
        self.rows * self.cols
    }

    pub fn images(&self) -> &[InputVector] {
        &self.images
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    /// Number of examples per digit class.
    pub fn class_counts(&self) -> [u64; 10] {
        let mut counts = [0u64; 10];
        for &l in &self.labels {
            counts[l as usize] += 1;
        }
        counts
    }
}
