//! SVG diagram of the core segment and Shapley point.
//!
//! Provider share runs along the horizontal axis, receiver share along the
//! vertical one. Geometry is computed in rationals and only the final pixel
//! coordinates are rounded to [`QUANTUM`] viewbox units.

use std::fmt::Write;

use num::{BigInt, One, Zero};
use thiserror::Error;

use crate::allocation::{u_bound, Allocation, CoreSegment};
use crate::isr_game::{IsrGame, Role};
use crate::number::{format_util, ratio, util, Util};

const SIZE: i64 = 480;
const MARGIN: i64 = 70;
const PLOT: i64 = SIZE - 2 * MARGIN;

/// Coordinates are rounded to multiples of 1/1000 of a viewbox unit.
pub const QUANTUM: (i64, i64) = (1, 1000);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlotError {
    #[error("{what} {point} does not lie on the efficiency line T_A + T_B = {}", format_util(.t_sigma))]
    MismatchedInputs {
        what: &'static str,
        point: Allocation,
        t_sigma: Util,
    },
}

/// Affine map from allocation space to SVG viewbox coordinates, with equal
/// scale on both axes.
#[derive(Debug, Clone)]
pub struct AxisTransform {
    lo: Util,
    scale: Util,
}

impl AxisTransform {
    fn covering<'a>(values: impl IntoIterator<Item = &'a Util>) -> Self {
        let zero = Util::zero();
        let (mut lo, mut hi) = (zero.clone(), zero);
        for v in values {
            if *v < lo {
                lo = v.clone();
            }
            if *v > hi {
                hi = v.clone();
            }
        }
        let span = if hi == lo { Util::one() } else { &hi - &lo };
        AxisTransform {
            lo,
            scale: util(PLOT) / span,
        }
    }

    /// Exact horizontal viewbox coordinate of a provider share.
    pub fn x(&self, value: &Util) -> Util {
        util(MARGIN) + (value - &self.lo) * &self.scale
    }

    /// Exact vertical viewbox coordinate of a receiver share.
    pub fn y(&self, value: &Util) -> Util {
        util(MARGIN + PLOT) - (value - &self.lo) * &self.scale
    }
}

/// The transform `render_core_plot` uses for this game.
pub fn plot_transform(
    segment: &CoreSegment,
    shapley_point: &Allocation,
    game: &IsrGame,
) -> AxisTransform {
    let u_provider = u_bound(game, Role::Provider);
    let u_receiver = u_bound(game, Role::Receiver);
    AxisTransform::covering([
        game.t_sigma(),
        game.traditional(Role::Provider),
        game.traditional(Role::Receiver),
        &u_provider,
        &u_receiver,
        &segment.alpha.provider_share,
        &segment.alpha.receiver_share,
        &segment.beta.provider_share,
        &segment.beta.receiver_share,
        &shapley_point.provider_share,
        &shapley_point.receiver_share,
    ])
}

/// Rounds to the nearest multiple of [`QUANTUM`] and prints three decimals.
pub fn quantize(value: &Util) -> String {
    let steps = (value * ratio(QUANTUM.1, QUANTUM.0)).round().to_integer();
    let negative = steps < BigInt::zero();
    let digits = format!("{:0>4}", if negative { -steps } else { steps });
    let (int_part, frac_part) = digits.split_at(digits.len() - 3);
    format!("{}{int_part}.{frac_part}", if negative { "-" } else { "" })
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

pub fn render_core_plot(
    segment: &CoreSegment,
    shapley_point: &Allocation,
    game: &IsrGame,
) -> Result<Vec<u8>, PlotError> {
    let t_sigma = game.t_sigma();
    for (what, point) in [
        ("alpha", &segment.alpha),
        ("beta", &segment.beta),
        ("Shapley point", shapley_point),
    ] {
        if point.total() != *t_sigma {
            return Err(PlotError::MismatchedInputs {
                what,
                point: point.clone(),
                t_sigma: t_sigma.clone(),
            });
        }
    }

    let tf = plot_transform(segment, shapley_point, game);
    let zero = Util::zero();
    let px = |v: &Util| quantize(&tf.x(v));
    let py = |v: &Util| quantize(&tf.y(v));
    let (near, far) = (quantize(&util(MARGIN)), quantize(&util(MARGIN + PLOT)));

    let mut svg = String::new();
    let w = &mut svg;
    writeln!(w, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(
        w,
        "<title>Core and Shapley allocations: {} / {}</title>",
        escape(&game.provider().label),
        escape(&game.receiver().label)
    )
    .unwrap();
    writeln!(w, r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#).unwrap();

    // axes through the origin
    writeln!(
        w,
        r#"<line id="x-axis" x1="{near}" y1="{y0}" x2="{far}" y2="{y0}" stroke="black" stroke-width="1.5"/>"#,
        y0 = py(&zero)
    )
    .unwrap();
    writeln!(
        w,
        r#"<line id="y-axis" x1="{x0}" y1="{far}" x2="{x0}" y2="{near}" stroke="black" stroke-width="1.5"/>"#,
        x0 = px(&zero)
    )
    .unwrap();
    writeln!(
        w,
        r#"<text x="{far}" y="{}" text-anchor="end">T_A: {}</text>"#,
        quantize(&(tf.y(&zero) + util(50))),
        escape(&game.provider().label)
    )
    .unwrap();
    writeln!(
        w,
        r#"<text x="{}" y="{}" text-anchor="start">T_B: {}</text>"#,
        quantize(&(tf.x(&zero) + util(6))),
        quantize(&(util(MARGIN) - util(10))),
        escape(&game.receiver().label)
    )
    .unwrap();

    let u_provider = u_bound(game, Role::Provider);
    let u_receiver = u_bound(game, Role::Receiver);
    let vertical_guides = [
        (
            "guide-t-provider",
            "T_A(σ̄)",
            game.traditional(Role::Provider),
            14,
        ),
        ("guide-u-provider", "U_A(σ)", &u_provider, 28),
    ];
    for (id, label, value, offset) in vertical_guides {
        let x = px(value);
        writeln!(
            w,
            r##"<line id="{id}" x1="{x}" y1="{far}" x2="{x}" y2="{near}" stroke="#888" stroke-width="0.8" stroke-dasharray="4 3"/>"##
        )
        .unwrap();
        writeln!(
            w,
            r#"<text x="{x}" y="{}" text-anchor="middle">{label} = {}</text>"#,
            quantize(&util(MARGIN + PLOT + offset)),
            format_util(value)
        )
        .unwrap();
    }
    let horizontal_guides = [
        (
            "guide-t-receiver",
            "T_B(σ̄)",
            game.traditional(Role::Receiver),
        ),
        ("guide-u-receiver", "U_B(σ)", &u_receiver),
    ];
    for (id, label, value) in horizontal_guides {
        let y = py(value);
        writeln!(
            w,
            r##"<line id="{id}" x1="{near}" y1="{y}" x2="{far}" y2="{y}" stroke="#888" stroke-width="0.8" stroke-dasharray="4 3"/>"##
        )
        .unwrap();
        writeln!(
            w,
            r#"<text x="{}" y="{y}" text-anchor="end">{label} = {}</text>"#,
            quantize(&(util(MARGIN) - util(4))),
            format_util(value)
        )
        .unwrap();
    }

    writeln!(
        w,
        r#"<line id="efficiency-line" x1="{}" y1="{}" x2="{}" y2="{}" stroke="black" stroke-width="1.2"/>"#,
        px(&zero),
        py(t_sigma),
        px(t_sigma),
        py(&zero)
    )
    .unwrap();
    writeln!(
        w,
        r#"<line id="core-segment" x1="{}" y1="{}" x2="{}" y2="{}" stroke="black" stroke-width="4" stroke-linecap="round"/>"#,
        px(&segment.alpha.provider_share),
        py(&segment.alpha.receiver_share),
        px(&segment.beta.provider_share),
        py(&segment.beta.receiver_share)
    )
    .unwrap();

    // coinciding points share one marker
    let mut markers: Vec<(Vec<(&str, &str)>, &Allocation)> = Vec::new();
    for (name, symbol, point) in [
        ("alpha", "α", &segment.alpha),
        ("beta", "β", &segment.beta),
        ("gamma", "γ", shapley_point),
    ] {
        match markers.iter_mut().find(|(_, p)| *p == point) {
            Some((names, _)) => names.push((name, symbol)),
            None => markers.push((vec![(name, symbol)], point)),
        }
    }
    for (names, point) in markers {
        let id = names.iter().map(|(n, _)| *n).collect::<Vec<_>>().join("-");
        let label = names
            .iter()
            .map(|(_, s)| *s)
            .collect::<Vec<_>>()
            .join(" = ");
        let (cx, cy) = (px(&point.provider_share), py(&point.receiver_share));
        writeln!(
            w,
            r#"<circle id="{id}" cx="{cx}" cy="{cy}" r="3.5" fill="black"/>"#
        )
        .unwrap();
        writeln!(
            w,
            r#"<text id="{id}-label" x="{}" y="{}">{label} {point}</text>"#,
            quantize(&(tf.x(&point.provider_share) + util(7))),
            quantize(&(tf.y(&point.receiver_share) - util(7)))
        )
        .unwrap();
    }
    writeln!(w, "</svg>").unwrap();
    Ok(svg.into_bytes())
}
