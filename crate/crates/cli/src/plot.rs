//! Figures as exact geometry, rendered to SVG or dumped as JSON.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use mukai_core::cases::{certify_case_regions, named_points, verify_first_wall, Case};
use mukai_core::lattice::SurfaceParams;
use mukai_core::num::{fmt_q, to_f64};
use mukai_core::plane::{ChargeValue, HalfInt, HoleSegment, PlanePoint};
use mukai_core::region::{make_u_region, Region};
use mukai_core::walls::{holes_within, wall_component, SegmentEnd};
use mukai_core::{Error, Result};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const PAD: f64 = 24.0;
const PARABOLA_SAMPLES: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FigureKind {
    /// Root-free regions, holes and named points.
    Regions,
    /// The first wall, competing candidate walls and holes.
    Walls,
    /// The triangle and inner polygon of central charges.
    Polygon,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct View {
    #[serde(with = "mukai_core::num::serde_q")]
    pub x_min: BigRational,
    #[serde(with = "mukai_core::num::serde_q")]
    pub x_max: BigRational,
    #[serde(with = "mukai_core::num::serde_q")]
    pub y_min: BigRational,
    #[serde(with = "mukai_core::num::serde_q")]
    pub y_max: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Shape {
    pub id: String,
    pub class: String,
    pub points: Vec<PlanePoint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stroke {
    pub id: String,
    pub class: String,
    pub from: SegmentEnd,
    pub to: SegmentEnd,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Marker {
    pub label: String,
    pub point: PlanePoint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Figure {
    pub name: String,
    pub view: View,
    /// `H²` when the parabola `y = (H²/2)x²` is drawn.
    pub parabola_h2: Option<String>,
    pub shapes: Vec<Shape>,
    pub strokes: Vec<Stroke>,
    pub markers: Vec<Marker>,
}

fn point_end(p: &PlanePoint) -> SegmentEnd {
    SegmentEnd::Point { point: p.clone() }
}

/// Snap a float box outward to hundredths, with a margin.
fn view_around(points: &[(f64, f64)], symmetric: bool) -> View {
    let (mut x0, mut x1, mut y0, mut y1) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for &(x, y) in points {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if symmetric {
        let m = x0.abs().max(x1.abs());
        x0 = -m;
        x1 = m;
    }
    let mx = (x1 - x0).max(1e-3) * 0.1;
    let my = (y1 - y0).max(1e-3) * 0.1;
    let snap = |v: f64, up: bool| {
        let k = if up { (v * 100.0).ceil() } else { (v * 100.0).floor() };
        BigRational::new(BigInt::from(k as i64), BigInt::from(100))
    };
    View {
        x_min: snap(x0 - mx, false),
        x_max: snap(x1 + mx, true),
        y_min: snap(y0 - my, false),
        y_max: snap(y1 + my, true),
    }
}

fn approx(p: &PlanePoint) -> (f64, f64) {
    (to_f64(&p.x), to_f64(&p.y))
}

fn view_rect(view: &View) -> Vec<PlanePoint> {
    vec![
        PlanePoint::new(view.x_min.clone(), view.y_min.clone()),
        PlanePoint::new(view.x_max.clone(), view.y_min.clone()),
        PlanePoint::new(view.x_max.clone(), view.y_max.clone()),
        PlanePoint::new(view.x_min.clone(), view.y_max.clone()),
    ]
}

/// Keep the part of a convex polygon with `a·x + b·y ≤ d`.
fn clip(poly: &[PlanePoint], a: &BigRational, b: &BigRational, d: &BigRational) -> Vec<PlanePoint> {
    let f = |p: &PlanePoint| a * &p.x + b * &p.y - d;
    let mut out = Vec::new();
    for i in 0..poly.len() {
        let (p, q) = (&poly[i], &poly[(i + 1) % poly.len()]);
        let (fp, fq) = (f(p), f(q));
        if !fp.is_positive() {
            out.push(p.clone());
        }
        if (fp.is_positive() && fq.is_negative()) || (fp.is_negative() && fq.is_positive()) {
            out.push(p.lerp(q, &(&fp / (&fp - &fq))));
        }
    }
    out.dedup();
    out
}

fn clip_halfplanes(view: &View, planes: &[(BigRational, BigRational, BigRational)]) -> Vec<PlanePoint> {
    let mut poly = view_rect(view);
    for (a, b, d) in planes {
        if poly.is_empty() {
            break;
        }
        poly = clip(&poly, a, b, d);
    }
    poly
}

/// Closures of the convex pieces of `region` inside the view.
fn region_polygons(region: &Region, view: &View) -> Vec<Vec<PlanePoint>> {
    let mut out = Vec::new();
    match region {
        Region::Halfplanes { halfplanes } => {
            let planes: Vec<_> = halfplanes.iter().map(|h| (h.a.clone(), h.b.clone(), h.d.clone())).collect();
            out.push(clip_halfplanes(view, &planes));
        }
        Region::Rectangle { lo, hi } => {
            let one = BigRational::from_integer(1.into());
            let zero = BigRational::zero();
            out.push(clip_halfplanes(
                view,
                &[
                    (-&one, zero.clone(), -lo.x.clone()),
                    (one.clone(), zero.clone(), hi.x.clone()),
                    (zero.clone(), -&one, -lo.y.clone()),
                    (zero, one, hi.y.clone()),
                ],
            ));
        }
        Region::Triangle { vertices } => {
            let orient = (&vertices[1].x - &vertices[0].x) * (&vertices[2].y - &vertices[0].y)
                - (&vertices[1].y - &vertices[0].y) * (&vertices[2].x - &vertices[0].x);
            let planes: Vec<_> = (0..3)
                .map(|i| {
                    let (p, q) = (&vertices[i], &vertices[(i + 1) % 3]);
                    // Inside lies to the left of p→q for counter-clockwise order.
                    let (mut a, mut b) = (&q.y - &p.y, &p.x - &q.x);
                    if orient.is_negative() {
                        a = -a;
                        b = -b;
                    }
                    let d = &a * &p.x + &b * &p.y;
                    (a, b, d)
                })
                .collect();
            out.push(clip_halfplanes(view, &planes));
        }
        Region::Cone { apex, dir1, dir2 } => {
            let det = &dir1.x * &dir2.y - &dir1.y * &dir2.x;
            let sign = if det.is_positive() { BigRational::from_integer(1.into()) } else { BigRational::from_integer((-1).into()) };
            // sign·cross(v, dir2) > 0 and sign·cross(dir1, v) > 0 with v = P − apex.
            let a1 = -(&sign * &dir2.y);
            let b1 = &sign * &dir2.x;
            let a2 = &sign * &dir1.y;
            let b2 = -(&sign * &dir1.x);
            let d1 = &a1 * &apex.x + &b1 * &apex.y;
            let d2 = &a2 * &apex.x + &b2 * &apex.y;
            out.push(clip_halfplanes(view, &[(a1, b1, d1), (a2, b2, d2)]));
        }
        Region::Union { parts } => {
            for p in parts {
                out.extend(region_polygons(p, view));
            }
        }
        Region::Segment { .. } => {}
    }
    out.retain(|p| p.len() >= 3);
    out
}

fn inside_view(p: (f64, f64), view: &View) -> bool {
    let (x0, x1, y0, y1) = (to_f64(&view.x_min), to_f64(&view.x_max), to_f64(&view.y_min), to_f64(&view.y_max));
    x0 <= p.0 && p.0 <= x1 && y0 <= p.1 && p.1 <= y1
}

fn hole_strokes(holes: &[HoleSegment], view: &View) -> Vec<Stroke> {
    let mut out = Vec::new();
    for h in holes {
        let (from, to) = match h {
            HoleSegment::Segment { from, to } => (from.clone(), point_end(to)),
            HoleSegment::VerticalRay { from } => (from.clone(), SegmentEnd::AtInfinity),
        };
        let to_pt = to.approx().unwrap_or((to_f64(&from.x), to_f64(&view.y_max)));
        if !inside_view(approx(&from), view) && !inside_view(to_pt, view) {
            continue;
        }
        out.push(Stroke {
            id: format!("hole-{}", out.len()),
            class: "hole".into(),
            from: point_end(&from),
            to,
        });
    }
    out
}

fn case_markers(case: &Case) -> Vec<Marker> {
    named_points(case)
        .into_iter()
        .map(|(label, point)| Marker { label, point })
        .collect()
}

fn plane_view(markers: &[Marker]) -> View {
    let pts: Vec<_> = markers.iter().map(|m| approx(&m.point)).collect();
    view_around(&pts, true)
}

fn guides(case: &Case) -> Vec<Stroke> {
    let pts = named_points(case);
    let pairs: &[(&str, &str)] = match case {
        Case::A(_) => &[("o", "o'"), ("q'", "p"), ("gamma_m", "gamma_n"), ("gamma_-m", "gamma_-n")],
        Case::B(_) => &[("o", "o'"), ("s'", "q"), ("gamma_m", "gamma_n"), ("gamma_-m", "gamma_-n")],
    };
    pairs
        .iter()
        .map(|(a, b)| Stroke {
            id: format!("guide-{a}-{b}"),
            class: "guide".into(),
            from: point_end(&pts[*a]),
            to: point_end(&pts[*b]),
        })
        .collect()
}

pub fn regions_figure(surf: &SurfaceParams, case: Option<&Case>, n: Option<HalfInt>, hole_bound: u64) -> Result<Figure> {
    let (markers, indices, name) = match case {
        Some(case) => {
            let cert = certify_case_regions(case)?;
            let ks: Vec<HalfInt> = cert.u_regions.iter().map(|u| u.n).collect();
            (case_markers(case), ks, format!("regions {}", case.label()))
        }
        None => {
            let top = surf.h2().to_u64().ok_or_else(|| Error::InvalidSurface(surf.h2().to_string()))?;
            let ks = match n {
                Some(n) => vec![n],
                None => (1..=top).map(|t| HalfInt::from_twice(t).expect("positive")).collect(),
            };
            let markers = vec![
                Marker { label: "o".into(), point: PlanePoint::origin() },
                Marker { label: "o'".into(), point: PlanePoint::new(BigRational::zero(), BigRational::from_integer(1.into())) },
            ];
            (markers, ks, format!("regions H^2={}", surf.h2()))
        }
    };
    let view = match case {
        Some(_) => plane_view(&markers),
        None => view_around(&[(-1.0, 0.0), (1.0, 1.5)], true),
    };
    let mut shapes = Vec::new();
    for k in indices {
        for (i, poly) in region_polygons(&make_u_region(k, surf), &view).into_iter().enumerate() {
            shapes.push(Shape { id: format!("u-{}-{i}", k.twice), class: "u-region".into(), points: poly });
        }
    }
    let mut strokes = hole_strokes(&holes_within(surf, hole_bound), &view);
    if let Some(case) = case {
        strokes.extend(guides(case));
    }
    Ok(Figure { name, view, parabola_h2: Some(surf.h2().to_string()), shapes, strokes, markers })
}

pub fn walls_figure(surf: &SurfaceParams, case: &Case, hole_bound: u64) -> Result<Figure> {
    let cert = verify_first_wall(case)?;
    let markers = case_markers(case);
    let view = plane_view(&markers);
    let holes = holes_within(surf, hole_bound);
    let mut strokes = hole_strokes(&holes, &view);
    strokes.extend(guides(case));
    let fw = &cert.first_wall;
    strokes.push(Stroke {
        id: "first-wall".into(),
        class: "wall first".into(),
        from: fw.wall.segment.0.clone(),
        to: fw.wall.segment.1.clone(),
    });
    for (i, cand) in fw.candidates.iter().enumerate().filter(|(_, c)| c.line != fw.wall.line) {
        let (a, b) = wall_component(&cand.line, &cand.crossing, surf, &holes)?;
        strokes.push(Stroke { id: format!("wall-{i}"), class: "wall".into(), from: a, to: b });
    }
    Ok(Figure {
        name: format!("walls {}", case.label()),
        view,
        parabola_h2: Some(surf.h2().to_string()),
        shapes: Vec::new(),
        strokes,
        markers,
    })
}

fn charge_point(z: &ChargeValue) -> PlanePoint {
    PlanePoint::new(z.re.clone(), z.im.clone())
}

pub fn polygon_figure(case: &Case) -> Result<Figure> {
    let tri = case.triangle();
    let inner = case.inner_polygon();
    let mut markers = vec![Marker { label: "o".into(), point: PlanePoint::origin() }];
    let tv = tri.vertices();
    markers.push(Marker { label: "g1".into(), point: charge_point(&tv[1]) });
    markers.push(Marker { label: "g2".into(), point: charge_point(&tv[2]) });
    let inner_vs = inner.vertices();
    let inner_labels: Vec<String> = match case {
        Case::A(_) => vec!["g1'".into(), "g2'".into()],
        Case::B(_) => vec!["s1".into(), "s2".into(), "s3".into()],
    };
    for (label, z) in inner_labels.into_iter().zip(inner_vs[1..inner_vs.len() - 1].iter()) {
        markers.push(Marker { label, point: charge_point(z) });
    }
    let pts: Vec<_> = markers.iter().map(|m| approx(&m.point)).collect();
    let view = view_around(&pts, false);
    let shapes = vec![
        Shape { id: "triangle".into(), class: "triangle".into(), points: tv.iter().map(charge_point).collect() },
        Shape { id: "inner".into(), class: "inner".into(), points: inner_vs.iter().map(charge_point).collect() },
    ];
    Ok(Figure { name: format!("polygon {}", case.label()), view, parabola_h2: None, shapes, strokes: Vec::new(), markers })
}

fn fmt6(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn end_attr(e: &SegmentEnd) -> String {
    match e {
        SegmentEnd::Point { point } => format!("{},{}", fmt_q(&point.x), fmt_q(&point.y)),
        SegmentEnd::Parabola { x, y } => format!("{x},{y}"),
        SegmentEnd::AtInfinity => "inf".into(),
    }
}

fn stroke_style(class: &str) -> &'static str {
    match class {
        "hole" => r##"stroke="#c0392b" stroke-width="1.5""##,
        "guide" => r##"stroke="#7f7f7f" stroke-width="1" stroke-dasharray="4 3""##,
        "wall first" => r##"stroke="#1f4e9c" stroke-width="2.5""##,
        _ => r##"stroke="#5b8bd6" stroke-width="1""##,
    }
}

pub fn render_svg(fig: &Figure) -> String {
    let v = &fig.view;
    let (x0, x1, y0, y1) = (to_f64(&v.x_min), to_f64(&v.x_max), to_f64(&v.y_min), to_f64(&v.y_max));
    let sx = (WIDTH - 2.0 * PAD) / (x1 - x0);
    let sy = (HEIGHT - 2.0 * PAD) / (y1 - y0);
    let tx = PAD - sx * x0;
    let ty = PAD + sy * y1;
    let px = |x: f64| tx + sx * x;
    let py = |y: f64| ty - sy * y;
    let mut s = String::new();
    let w = &mut s;
    writeln!(w, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )
    .unwrap();
    writeln!(w, "<title>{}</title>", escape(&fig.name)).unwrap();
    writeln!(
        w,
        r#"<defs><clipPath id="view"><rect x="{}" y="{}" width="{}" height="{}"/></clipPath></defs>"#,
        fmt6(x0),
        fmt6(y0),
        fmt6(x1 - x0),
        fmt6(y1 - y0)
    )
    .unwrap();
    writeln!(w, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#).unwrap();
    writeln!(
        w,
        r#"<g id="plane" transform="matrix({} 0 0 {} {} {})">"#,
        fmt6(sx),
        fmt6(-sy),
        fmt6(tx),
        fmt6(ty)
    )
    .unwrap();
    writeln!(w, r#"<g clip-path="url(#view)">"#).unwrap();
    // Axes.
    writeln!(
        w,
        r##"<g id="axes" stroke="#b0b0b0" stroke-width="0.75" vector-effect="non-scaling-stroke"><line x1="{}" y1="0" x2="{}" y2="0" vector-effect="non-scaling-stroke"/><line x1="0" y1="{}" x2="0" y2="{}" vector-effect="non-scaling-stroke"/></g>"##,
        fmt6(x0),
        fmt6(x1),
        fmt6(y0),
        fmt6(y1)
    )
    .unwrap();
    writeln!(w, r##"<g id="shapes">"##).unwrap();
    for shape in &fig.shapes {
        let d: Vec<String> = shape
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| format!("{}{} {}", if i == 0 { "M" } else { "L" }, fmt6(to_f64(&p.x)), fmt6(to_f64(&p.y))))
            .collect();
        let style = match shape.class.as_str() {
            "u-region" => r##"fill="#9e9e9e" fill-opacity="0.35" stroke="none""##,
            "triangle" => r##"fill="none" stroke="#1f4e9c" stroke-width="1.5" vector-effect="non-scaling-stroke""##,
            _ => r##"fill="#9e9e9e" fill-opacity="0.35" stroke="#444444" stroke-width="1" vector-effect="non-scaling-stroke""##,
        };
        writeln!(w, r#"<path id="{}" class="{}" d="{} Z" {style}/>"#, escape(&shape.id), escape(&shape.class), d.join(" ")).unwrap();
    }
    writeln!(w, "</g>").unwrap();
    if let Some(h2) = &fig.parabola_h2 {
        let k = h2.parse::<f64>().unwrap_or(0.0) / 2.0;
        let mut d = Vec::with_capacity(PARABOLA_SAMPLES + 1);
        for i in 0..=PARABOLA_SAMPLES {
            let x = x0 + (x1 - x0) * i as f64 / PARABOLA_SAMPLES as f64;
            d.push(format!("{}{} {}", if i == 0 { "M" } else { "L" }, fmt6(x), fmt6(k * x * x)));
        }
        writeln!(
            w,
            r#"<path id="parabola" data-h2="{}" d="{}" fill="none" stroke="black" stroke-width="1.5" vector-effect="non-scaling-stroke"/>"#,
            escape(h2),
            d.join(" ")
        )
        .unwrap();
    }
    writeln!(w, r#"<g id="segments">"#).unwrap();
    for st in &fig.strokes {
        let Some(a) = st.from.approx() else { continue };
        let b = match st.to.approx() {
            Some(b) => b,
            None => (a.0, y1),
        };
        writeln!(
            w,
            r#"<line id="{}" class="{}" x1="{}" y1="{}" x2="{}" y2="{}" data-p1="{}" data-p2="{}" {} vector-effect="non-scaling-stroke"/>"#,
            escape(&st.id),
            escape(&st.class),
            fmt6(a.0),
            fmt6(a.1),
            fmt6(b.0),
            fmt6(b.1),
            escape(&end_attr(&st.from)),
            escape(&end_attr(&st.to)),
            stroke_style(&st.class)
        )
        .unwrap();
    }
    writeln!(w, "</g>\n</g>\n</g>").unwrap();
    writeln!(w, r#"<g id="markers" font-family="sans-serif" font-size="12">"#).unwrap();
    for m in &fig.markers {
        let (x, y) = approx(&m.point);
        if !inside_view((x, y), v) {
            continue;
        }
        writeln!(
            w,
            r#"<g class="marker" data-label="{}" data-x="{}" data-y="{}"><circle cx="{}" cy="{}" r="3" fill="black"/><text x="{}" y="{}">{}</text></g>"#,
            escape(&m.label),
            fmt_q(&m.point.x),
            fmt_q(&m.point.y),
            fmt6(px(x)),
            fmt6(py(y)),
            fmt6(px(x) + 5.0),
            fmt6(py(y) - 5.0),
            escape(&m.label)
        )
        .unwrap();
    }
    writeln!(w, "</g>\n</svg>").unwrap();
    s
}
