use polyiter::poly::{parse, Polynomial};
use polyiter::render::{
    cell_color, colorize, pixel_to_point, ppm_bytes, read_ppm_header, render, render_with, Execution, RenderConfig,
    Window,
};
use polyiter::schemes::IterationScheme;
use polyiter::Complex64;

#[test]
fn unity_roots_give_one_basin_per_root() {
    for n in [3, 4, 8] {
        let img = render(&RenderConfig::new(Polynomial::unity(n).unwrap()).with_size(300, 300)).unwrap();
        assert_eq!(img.basins().len(), n, "z^{n} - 1");
    }
}

#[test]
fn pixel_at_one_converges_quickly_to_one() {
    let cfg = RenderConfig::new(parse("z^3 - 1", 'z').unwrap());
    let img = render(&cfg).unwrap();
    // 600 px over [-1.5, 1.5]: column 500 spans re in [1.0, 1.005), row 299 spans im in [0, 0.005)
    let (col, row) = (500, 299);
    let z = pixel_to_point(&cfg, col, row).unwrap();
    assert!((z - Complex64::new(1.0, 0.0)).norm() < 0.005);
    let cell = img.cell(row, col);
    let root = img.roots().roots()[cell.root.unwrap()];
    assert!((root - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    assert!(cell.iterations <= 2);
}

#[test]
fn off_axis_window_parallel_matches_sequential() {
    let cfg = RenderConfig::new(parse("z^5 + z^2 + 1", 'z').unwrap())
        .with_size(97, 61)
        .with_window(Window::new(-0.3, 1.7, 0.2, 1.4).unwrap())
        .with_scheme("s:0.8,0.6".parse().unwrap());
    let a = render_with(&cfg, Execution::Parallel).unwrap();
    let b = render_with(&cfg, Execution::Sequential).unwrap();
    assert_eq!(a, b);
    let mut da = Vec::new();
    let mut db = Vec::new();
    a.write_dump(&mut da).unwrap();
    b.write_dump(&mut db).unwrap();
    assert_eq!(da, db);
    assert_eq!(String::from_utf8(da).unwrap().lines().count(), 97 * 61);
}

#[test]
fn colors_darken_with_iterations_within_a_basin() {
    let img = render(&RenderConfig::new(Polynomial::unity(4).unwrap()).with_size(120, 120)).unwrap();
    let rgb = colorize(&img, img.max_iter(), 4);
    let brightness = |px: [u8; 3]| *px.iter().max().unwrap();
    for row in 0..120 {
        for col in 0..120 {
            let cell = img.cell(row, col);
            let px = rgb.pixel(row, col);
            match cell.root {
                None => assert_eq!(px, [0, 0, 0]),
                Some(r) => {
                    assert_eq!(px, cell_color(r, cell.iterations, 12, 4));
                    if cell.iterations > 0 {
                        assert!(brightness(px) <= brightness(cell_color(r, cell.iterations - 1, 12, 4)));
                    }
                }
            }
        }
    }
}

#[test]
fn ppm_header_round_trip() {
    let img = render(&RenderConfig::new(Polynomial::unity(3).unwrap()).with_size(40, 30)).unwrap();
    let bytes = ppm_bytes(&colorize(&img, 12, 3));
    let (w, h, max, offset) = read_ppm_header(&bytes).unwrap();
    assert_eq!((w, h, max), (40, 30, 255));
    assert_eq!(bytes.len() - offset, 40 * 30 * 3);
}

#[test]
fn schemes_differ_but_each_is_symmetric() {
    let p = parse("z^5 + z^2 + 1", 'z').unwrap();
    let mut means = Vec::new();
    for s in ["newton", "picard_mann:0.8", "three_step:0.5,0.6,0.8", "kadioglu:0.8,0.6", "s:0.8,0.6"] {
        let scheme: IterationScheme = s.parse().unwrap();
        let img = render(&RenderConfig::new(p.clone()).with_scheme(scheme).with_size(150, 151)).unwrap();
        assert_eq!(img.mirror_mismatches(), 0, "{s}");
        means.push(img.mean_iterations().unwrap());
    }
    assert!(means.windows(2).any(|w| w[0] != w[1]));
}
