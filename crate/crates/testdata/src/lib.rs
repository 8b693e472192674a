//! Test and bench fixtures: a bit-exact IDX writer and a deterministic
//! synthetic digit corpus in the same container format and shape as the
//! classic handwritten-digit files (28x28 grayscale, 60k train / 10k
//! test).
//!
//! Set `FLASHSNN_DATA_DIR` to a directory holding the real
//! `train-images-idx3-ubyte` / `train-labels-idx1-ubyte` /
//! `t10k-images-idx3-ubyte` / `t10k-labels-idx1-ubyte` files to run the
//! data-driven tests against them instead; otherwise the synthetic corpus
//! is generated once into `target/fixtures/` and reused.

mod glyphs;

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use glyphs::{ART_COLS, GLYPHS, N_STYLES};

pub const DATA_DIR_ENV: &str = "FLASHSNN_DATA_DIR";

/// Bumped whenever the generator changes, to invalidate cached corpora.
pub const CORPUS_VERSION: u32 = 1;

pub const TRAIN_IMAGES: &str = "train-images-idx3-ubyte";
pub const TRAIN_LABELS: &str = "train-labels-idx1-ubyte";
pub const TEST_IMAGES: &str = "t10k-images-idx3-ubyte";
pub const TEST_LABELS: &str = "t10k-labels-idx1-ubyte";

const IMAGES_MAGIC: u32 = 0x0000_0803;
const LABELS_MAGIC: u32 = 0x0000_0801;

/// Write an IDX image file: magic, count, rows, cols (big-endian u32),
/// then row-major unsigned-byte images.
pub fn write_idx_images<W, I, B>(mut w: W, rows: u32, cols: u32, count: u32, images: I) -> io::Result<()>
where
    W: Write,
    I: IntoIterator<Item = B>,
    B: AsRef<[u8]>,
{
    w.write_all(&IMAGES_MAGIC.to_be_bytes())?;
    w.write_all(&count.to_be_bytes())?;
    w.write_all(&rows.to_be_bytes())?;
    w.write_all(&cols.to_be_bytes())?;
    let mut written = 0u32;
    for img in images {
        let img = img.as_ref();
        assert_eq!(img.len(), (rows * cols) as usize, "image size mismatch");
        w.write_all(img)?;
        written += 1;
    }
    assert_eq!(written, count, "image count mismatch");
    Ok(())
}

/// Write an IDX label file: magic, count, then one byte per label.
pub fn write_idx_labels<W, I>(mut w: W, count: u32, labels: I) -> io::Result<()>
where
    W: Write,
    I: IntoIterator<Item = u8>,
{
    w.write_all(&LABELS_MAGIC.to_be_bytes())?;
    w.write_all(&count.to_be_bytes())?;
    let mut written = 0u32;
    for l in labels {
        w.write_all(&[l])?;
        written += 1;
    }
    assert_eq!(written, count, "label count mismatch");
    Ok(())
}

/// Synthetic corpus shape.
#[derive(Debug, Clone)]
pub struct CorpusSpec {
    pub n_train: u32,
    pub n_test: u32,
    pub seed: u64,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        Self {
            n_train: 60_000,
            n_test: 10_000,
            seed: 0xD161,
        }
    }
}

const MARGIN_TOP: i32 = 2;
const MARGIN_LEFT: i32 = 6;
const MAX_SHIFT: i32 = 2;
const INK_LO: u8 = 160;
const BG_HI: u8 = 90;
const SPECKLE_P: f64 = 0.015;

/// Render one sample: pick a style variant, jitter its position, lay
/// noisy ink over a noisy background, then sprinkle salt-and-pepper
/// speckle.
fn render(class: u8, rng: &mut ChaCha8Rng) -> [u8; 784] {
    let style = rng.gen_range(0..N_STYLES);
    let dx = rng.gen_range(-MAX_SHIFT..=MAX_SHIFT);
    let dy = rng.gen_range(-MAX_SHIFT..=MAX_SHIFT);
    let art = &GLYPHS[class as usize * N_STYLES + style];

    let mut img = [0u8; 784];
    for p in img.iter_mut() {
        *p = rng.gen_range(0..=BG_HI);
    }
    for (r, row) in art.iter().enumerate() {
        debug_assert_eq!(row.len(), ART_COLS);
        for (c, ch) in row.bytes().enumerate() {
            if ch != b'#' {
                continue;
            }
            for sub in 0..4 {
                let y = MARGIN_TOP + 2 * r as i32 + (sub & 1) + dy;
                let x = MARGIN_LEFT + 2 * c as i32 + (sub >> 1) + dx;
                if (0..28).contains(&y) && (0..28).contains(&x) {
                    img[(y * 28 + x) as usize] = rng.gen_range(INK_LO..=255);
                }
            }
        }
    }
    for p in img.iter_mut() {
        if rng.gen_bool(SPECKLE_P) {
            *p = rng.gen_range(0..=255);
        }
    }
    img
}

fn write_split(dir: &Path, images_name: &str, labels_name: &str, n: u32, seed: u64) -> io::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let labels: Vec<u8> = (0..n).map(|_| rng.gen_range(0..10u8)).collect();

    let mut w = BufWriter::new(File::create(dir.join(images_name))?);
    let mut img_rng = rng.clone();
    write_idx_images(
        &mut w,
        28,
        28,
        n,
        labels.iter().map(|&c| render(c, &mut img_rng)),
    )?;
    w.flush()?;

    let mut w = BufWriter::new(File::create(dir.join(labels_name))?);
    write_idx_labels(&mut w, n, labels.iter().copied())?;
    w.flush()?;
    Ok(())
}

/// Generate all four corpus files into `dir`.
pub fn generate(dir: &Path, spec: &CorpusSpec) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    write_split(dir, TRAIN_IMAGES, TRAIN_LABELS, spec.n_train, spec.seed)?;
    write_split(dir, TEST_IMAGES, TEST_LABELS, spec.n_test, spec.seed ^ 0x7E57)?;
    Ok(())
}

fn has_all_files(dir: &Path) -> bool {
    [TRAIN_IMAGES, TRAIN_LABELS, TEST_IMAGES, TEST_LABELS]
        .iter()
        .all(|name| dir.join(name).is_file())
}

/// Directory holding the four IDX files tests should run against.
///
/// Honors `FLASHSNN_DATA_DIR` when set (real data); otherwise generates
/// the default synthetic corpus once under the workspace `target/` and
/// reuses it. Concurrent callers race benignly: generation goes to a
/// process-unique staging directory that is renamed into place.
pub fn dataset_dir() -> PathBuf {
    if let Some(dir) = std::env::var_os(DATA_DIR_ENV) {
        let dir = PathBuf::from(dir);
        assert!(
            has_all_files(&dir),
            "{DATA_DIR_ENV}={} must contain {TRAIN_IMAGES}, {TRAIN_LABELS}, {TEST_IMAGES}, {TEST_LABELS}",
            dir.display()
        );
        return dir;
    }

    let spec = CorpusSpec::default();
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../target/fixtures");
    let name = format!(
        "digits-v{CORPUS_VERSION}-{}-{}-s{:x}",
        spec.n_train, spec.n_test, spec.seed
    );
    let dir = root.join(&name);
    if has_all_files(&dir) {
        return dir;
    }

    let staging = root.join(format!("{name}.staging.{}", std::process::id()));
    generate(&staging, &spec).expect("corpus generation failed");
    match fs::rename(&staging, &dir) {
        Ok(()) => {}
        Err(_) if has_all_files(&dir) => {
            let _ = fs::remove_dir_all(&staging); // another process won the race
        }
        Err(e) => panic!("could not move corpus into place: {e}"),
    }
    dir
}
