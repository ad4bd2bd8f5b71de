//! Polynomiograph rendering.
//!
//! Every pixel center is mapped into a complex window, iterated with the chosen
//! scheme, and labeled with the nearest root of the polynomial when its orbit
//! converges. The result is a [`BasinImage`]; [`colorize`] turns it into RGB
//! and [`write_ppm`] writes a binary PPM.
//!
//! Pixel work is independent. With the `parallel` feature, rows are spread
//! over the rayon pool; output is identical to row-major sequential evaluation.

use std::collections::BTreeSet;
use std::io::{self, Write};

use num_complex::Complex64;

use crate::poly::{find_roots, Polynomial, RootError, RootSet};
use crate::schemes::{IterationScheme, NewtonMap, StopRule};

pub const DEFAULT_ALPHA: f64 = 0.8;
pub const DEFAULT_BETA: f64 = 0.6;
pub const DEFAULT_GAMMA: f64 = 0.5;
pub const DEFAULT_EPS: f64 = 0.001;
pub const DEFAULT_MAX_ITER: usize = 12;
pub const DEFAULT_SIZE: usize = 600;
pub const DEFAULT_ROOT_TOL: f64 = 1e-10;

#[derive(Debug, thiserror::Error)]
pub enum RenderError {
    #[error("window requires re_min < re_max and im_min < im_max")]
    BadWindow,
    #[error("image size must be positive, got {width}x{height}")]
    BadSize { width: usize, height: usize },
    #[error("pixel ({col}, {row}) outside {width}x{height}")]
    PixelOutOfRange { col: usize, row: usize, width: usize, height: usize },
    #[error("root finding failed: {0}")]
    Roots(#[from] RootError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Rectangle of the complex plane covered by the image.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    re_min: f64,
    re_max: f64,
    im_min: f64,
    im_max: f64,
}

impl Window {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self, RenderError> {
        let finite = [re_min, re_max, im_min, im_max].iter().all(|v| v.is_finite());
        if finite && re_min < re_max && im_min < im_max {
            Ok(Self { re_min, re_max, im_min, im_max })
        } else {
            Err(RenderError::BadWindow)
        }
    }

    pub fn bounds(&self) -> [f64; 4] {
        [self.re_min, self.re_max, self.im_min, self.im_max]
    }
}

impl Default for Window {
    /// `[-1.5, 1.5] x [-1.5, 1.5]`
    fn default() -> Self {
        Self { re_min: -1.5, re_max: 1.5, im_min: -1.5, im_max: 1.5 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderConfig {
    pub window: Window,
    pub width: usize,
    pub height: usize,
    pub scheme: IterationScheme,
    pub stop: StopRule,
    pub polynomial: Polynomial,
    pub root_tol: f64,
}

impl RenderConfig {
    /// 600x600 over `[-1.5, 1.5]²`, three-stage scheme with α = 0.8, β = 0.6,
    /// stopping when the displacement drops below 0.001 or after 12 steps.
    pub fn new(polynomial: Polynomial) -> Self {
        Self {
            window: Window::default(),
            width: DEFAULT_SIZE,
            height: DEFAULT_SIZE,
            scheme: IterationScheme::kadioglu(DEFAULT_ALPHA, DEFAULT_BETA).expect("default weights are valid"),
            stop: StopRule::default(),
            polynomial,
            root_tol: DEFAULT_ROOT_TOL,
        }
    }

    pub fn with_scheme(mut self, scheme: IterationScheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn with_size(mut self, width: usize, height: usize) -> Self {
        self.width = width;
        self.height = height;
        self
    }

    pub fn with_window(mut self, window: Window) -> Self {
        self.window = window;
        self
    }

    pub fn with_stop(mut self, stop: StopRule) -> Self {
        self.stop = stop;
        self
    }
}

/// Center of pixel `(col, row)`; row 0 is the top edge (`im_max`).
///
/// Computed as `mid + (2·col + 1 - width) · span / (2·width)`, which equals
/// `re_min + (col + 0.5) · span / width` but maps mirrored pixels of a
/// symmetric window to exactly negated coordinates.
pub fn pixel_to_point(config: &RenderConfig, col: usize, row: usize) -> Result<Complex64, RenderError> {
    let (width, height) = (config.width, config.height);
    if col >= width || row >= height {
        return Err(RenderError::PixelOutOfRange { col, row, width, height });
    }
    Ok(pixel_center(&config.window, width, height, col, row))
}

#[inline]
fn pixel_center(w: &Window, width: usize, height: usize, col: usize, row: usize) -> Complex64 {
    let re_mid = 0.5 * (w.re_min + w.re_max);
    let im_mid = 0.5 * (w.im_min + w.im_max);
    let re_half_step = (w.re_max - w.re_min) / (2 * width) as f64;
    let im_half_step = (w.im_max - w.im_min) / (2 * height) as f64;
    let re_offset = (2 * col + 1) as f64 - width as f64;
    let im_offset = height as f64 - (2 * row + 1) as f64;
    Complex64::new(re_mid + re_offset * re_half_step, im_mid + im_offset * im_half_step)
}

/// One pixel of a basin image.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Cell {
    /// Index into the image's [`RootSet`], present iff the orbit converged.
    pub root: Option<usize>,
    /// Steps taken; equals the iteration cap when the orbit did not converge.
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasinImage {
    width: usize,
    height: usize,
    max_iter: usize,
    cells: Vec<Cell>,
    roots: RootSet,
}

impl BasinImage {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Iteration cap the image was rendered with.
    pub fn max_iter(&self) -> usize {
        self.max_iter
    }

    /// Cells in row-major order, top row first.
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell(&self, row: usize, col: usize) -> Cell {
        self.cells[row * self.width + col]
    }

    pub fn roots(&self) -> &RootSet {
        &self.roots
    }

    /// Distinct root indices that appear in the image.
    pub fn basins(&self) -> BTreeSet<usize> {
        self.cells.iter().filter_map(|c| c.root).collect()
    }

    pub fn converged_count(&self) -> usize {
        self.cells.iter().filter(|c| c.root.is_some()).count()
    }

    pub fn converged_fraction(&self) -> f64 {
        self.converged_count() as f64 / self.cells.len() as f64
    }

    /// Mean iteration count over converged pixels, or `None` if none converged.
    pub fn mean_iterations(&self) -> Option<f64> {
        let (n, total) = self
            .cells
            .iter()
            .filter(|c| c.root.is_some())
            .fold((0usize, 0usize), |(n, t), c| (n + 1, t + c.iterations));
        (n > 0).then(|| total as f64 / n as f64)
    }

    /// Number of pixels whose vertical mirror does not carry the same
    /// iteration count and the conjugate root. Meaningful for real
    /// polynomials rendered over a window symmetric about the real axis.
    pub fn mirror_mismatches(&self) -> usize {
        let conj: Vec<Option<usize>> = (0..self.roots.len()).map(|i| self.roots.conjugate_index(i)).collect();
        let mut bad = 0;
        for row in 0..self.height {
            let mirror = self.height - 1 - row;
            for col in 0..self.width {
                let a = self.cell(row, col);
                let b = self.cell(mirror, col);
                let paired = match (a.root, b.root) {
                    (None, None) => true,
                    (Some(i), Some(j)) => conj[i] == Some(j),
                    _ => false,
                };
                if !paired || a.iterations != b.iterations {
                    bad += 1;
                }
            }
        }
        bad
    }

    /// Plain-text dump, one `row col root iterations` line per pixel, `-` for no root.
    pub fn write_dump(&self, mut sink: impl Write) -> io::Result<()> {
        for (i, c) in self.cells.iter().enumerate() {
            let (row, col) = (i / self.width, i % self.width);
            match c.root {
                Some(r) => writeln!(sink, "{row} {col} {r} {}", c.iterations)?,
                None => writeln!(sink, "{row} {col} - {}", c.iterations)?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Rayon row parallelism; same as `Sequential` without the `parallel` feature.
    #[default]
    Parallel,
}

/// Renders with the default execution mode.
pub fn render(config: &RenderConfig) -> Result<BasinImage, RenderError> {
    render_with(config, Execution::default())
}

pub fn render_with(config: &RenderConfig, execution: Execution) -> Result<BasinImage, RenderError> {
    let (width, height) = (config.width, config.height);
    if width == 0 || height == 0 {
        return Err(RenderError::BadSize { width, height });
    }
    let roots = find_roots(&config.polynomial, config.root_tol)?;
    let map = NewtonMap::new(config.polynomial.clone());
    let mut cells = vec![Cell { root: None, iterations: 0 }; width * height];

    let fill_row = |row: usize, out: &mut [Cell]| {
        for (col, cell) in out.iter_mut().enumerate() {
            let z0 = pixel_center(&config.window, width, height, col, row);
            *cell = classify(&config.scheme, &map, &config.stop, &roots, z0);
        }
    };

    match execution {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            cells.par_chunks_mut(width).enumerate().for_each(|(row, out)| fill_row(row, out));
        }
        _ => cells.chunks_mut(width).enumerate().for_each(|(row, out)| fill_row(row, out)),
    }

    Ok(BasinImage { width, height, max_iter: config.stop.max_iter, cells, roots })
}

#[inline]
fn classify(scheme: &IterationScheme, map: &NewtonMap, stop: &StopRule, roots: &RootSet, z0: Complex64) -> Cell {
    let end = scheme.orbit_end(map, z0, stop);
    if end.converged {
        Cell { root: Some(roots.nearest(end.final_point)), iterations: end.iterations }
    } else {
        Cell { root: None, iterations: stop.max_iter }
    }
}

/// Packed 8-bit RGB raster, row-major, top row first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    pub width: usize,
    pub height: usize,
    pub data: Vec<u8>,
}

impl RgbImage {
    pub fn new(width: usize, height: usize) -> Self {
        Self { width, height, data: vec![0; width * height * 3] }
    }

    pub fn pixel(&self, row: usize, col: usize) -> [u8; 3] {
        let i = 3 * (row * self.width + col);
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }
}

fn channel(x: f64) -> u8 {
    // half-up rounding
    (255.0 * x + 0.5).floor().clamp(0.0, 255.0) as u8
}

/// HSV to RGB by the six-sector formula; `h` in degrees, `s` and `v` in `[0, 1]`.
pub fn hsv_to_rgb(h: f64, s: f64, v: f64) -> [u8; 3] {
    let c = v * s;
    let hp = h.rem_euclid(360.0) / 60.0;
    let x = c * (1.0 - (hp % 2.0 - 1.0).abs());
    let (r, g, b) = match hp as u32 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    let m = v - c;
    [channel(r + m), channel(g + m), channel(b + m)]
}

/// Color of a converged pixel: hue by root, value falling from 1 to 0.3 as
/// the iteration count goes from 0 to `max_iter`.
pub fn cell_color(root: usize, iterations: usize, max_iter: usize, degree: usize) -> [u8; 3] {
    let hue = 360.0 * root as f64 / degree as f64;
    let value = 1.0 - 0.7 * iterations as f64 / max_iter as f64;
    hsv_to_rgb(hue, 1.0, value)
}

/// Maps basins to hues and iteration counts to brightness; non-converged
/// pixels are black.
///
/// # Panics
/// If a root index is not below `degree`.
pub fn colorize(image: &BasinImage, max_iter: usize, degree: usize) -> RgbImage {
    let mut rgb = RgbImage::new(image.width, image.height);
    for (cell, px) in image.cells.iter().zip(rgb.data.chunks_exact_mut(3)) {
        if let Some(r) = cell.root {
            assert!(r < degree, "root index {r} out of range for degree {degree}");
            px.copy_from_slice(&cell_color(r, cell.iterations, max_iter, degree));
        }
    }
    rgb
}

/// Binary PPM: `P6\n<width> <height>\n255\n` followed by RGB triples.
pub fn write_ppm(image: &RgbImage, mut sink: impl Write) -> io::Result<()> {
    write!(sink, "P6\n{} {}\n255\n", image.width, image.height)?;
    sink.write_all(&image.data)?;
    sink.flush()
}

pub fn ppm_bytes(image: &RgbImage) -> Vec<u8> {
    let mut out = Vec::with_capacity(image.data.len() + 32);
    write_ppm(image, &mut out).expect("writing to a Vec cannot fail");
    out
}

/// Reads back `(width, height, maxval)` and the offset of the pixel data.
pub fn read_ppm_header(bytes: &[u8]) -> Option<(usize, usize, u16, usize)> {
    let mut fields = Vec::with_capacity(4);
    let mut pos = 0;
    while fields.len() < 4 {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return None;
        }
        fields.push(std::str::from_utf8(&bytes[start..pos]).ok()?);
    }
    if fields[0] != "P6" || pos >= bytes.len() {
        return None;
    }
    Some((fields[1].parse().ok()?, fields[2].parse().ok()?, fields[3].parse().ok()?, pos + 1))
}
