use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::sunburst::{SunburstChart, SunburstNode};
use super::svg::{annot, num, ColorMap, Svg, NEUTRAL};
use crate::stats::{
    ComponentDelta, JaccardReport, MajorityReport, PairwiseMatrix, Selector, SignificanceBucket, TimeseriesReport,
};

#[derive(Debug, Clone, PartialEq)]
pub struct Style {
    pub width: f64,
    pub height: f64,
    pub font_family: String,
    pub font_size: f64,
    pub colors: ColorMap,
}

impl Default for Style {
    fn default() -> Self {
        Self {
            width: 640.0,
            height: 480.0,
            font_family: "sans-serif".into(),
            font_size: 11.0,
            colors: ColorMap::default(),
        }
    }
}

impl Style {
    fn svg(&self) -> Svg {
        Svg::new(self.width, self.height, &self.font_family, self.font_size)
    }
}

/// Stacked majority bars, one per scope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MajorityChart {
    pub selector: Selector,
    pub bars: Vec<MajorityReport>,
}

/// Signed component deltas, largest magnitude first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivergingChart {
    pub title: String,
    pub deltas: Vec<ComponentDelta>,
}

const MARGIN: f64 = 40.0;
const LABEL_W: f64 = 90.0;

pub fn timeseries(data: &TimeseriesReport, style: &Style) -> String {
    let mut s = style.svg();
    s.text(
        "title",
        style.width / 2.0,
        20.0,
        "middle",
        "LM-related share and mean term count",
    );
    let n = data.points.len();
    let plot_w = style.width - LABEL_W - MARGIN;
    let panel_h = (style.height - 3.0 * MARGIN) / 2.0;
    let x = |i: usize| {
        LABEL_W
            + if n > 1 {
                plot_w * i as f64 / (n - 1) as f64
            } else {
                plot_w / 2.0
            }
    };
    let top = MARGIN;
    let bottom = 2.0 * MARGIN + panel_h;

    s.line(LABEL_W, top + panel_h, LABEL_W + plot_w, top + panel_h, "#333333");
    s.line(LABEL_W, top, LABEL_W, top + panel_h, "#333333");
    s.text("axis", LABEL_W - 6.0, top + 4.0, "end", "1.00");
    s.text("axis", LABEL_W - 6.0, top + panel_h, "end", "0.00");
    s.text("axis-title", LABEL_W - 6.0, top + panel_h / 2.0, "end", "share");
    let prop: Vec<_> = data
        .points
        .iter()
        .enumerate()
        .map(|(i, p)| (x(i), top + panel_h * (1.0 - p.prop_lm_related)))
        .collect();
    s.polyline("series prop", &prop, "#4e79a7", false);
    for (i, p) in data.points.iter().enumerate() {
        s.circle(
            "point",
            prop[i].0,
            prop[i].1,
            3.0,
            "#4e79a7",
            Some(&format!("{}: {}", p.conference, annot(p.prop_lm_related))),
        );
    }

    let max = data
        .points
        .iter()
        .flat_map(|p| [p.mean_n_l, p.estimated_mean_n_l.unwrap_or(0.0)])
        .fold(0.0f64, f64::max)
        .max(1e-9);
    let y = |v: f64| bottom + panel_h * (1.0 - v / max);
    s.line(LABEL_W, bottom + panel_h, LABEL_W + plot_w, bottom + panel_h, "#333333");
    s.line(LABEL_W, bottom, LABEL_W, bottom + panel_h, "#333333");
    s.text("axis", LABEL_W - 6.0, bottom + 4.0, "end", &annot(max));
    s.text("axis", LABEL_W - 6.0, bottom + panel_h, "end", "0.00");
    s.text("axis-title", LABEL_W - 6.0, bottom + panel_h / 2.0, "end", "mean");
    let actual: Vec<_> = data
        .points
        .iter()
        .enumerate()
        .map(|(i, p)| (x(i), y(p.mean_n_l)))
        .collect();
    s.polyline("series mean", &actual, "#e15759", false);
    let est: Vec<_> = data
        .points
        .iter()
        .enumerate()
        .filter_map(|(i, p)| p.estimated_mean_n_l.map(|e| (x(i), y(e))))
        .collect();
    s.polyline("series estimate", &est, "#76b7b2", true);
    for (i, p) in data.points.iter().enumerate() {
        s.circle(
            "point",
            actual[i].0,
            actual[i].1,
            3.0,
            "#e15759",
            Some(&format!("{}: {}", p.conference, annot(p.mean_n_l))),
        );
        s.text(
            "tick",
            x(i),
            bottom + panel_h + 16.0,
            "middle",
            &p.conference.to_string(),
        );
    }
    s.finish()
}

fn bucket_fill(b: SignificanceBucket) -> &'static str {
    match b {
        SignificanceBucket::Ns => "#f7f7f7",
        SignificanceBucket::P05 => "#fcbba1",
        SignificanceBucket::P01 => "#fb6a4a",
        SignificanceBucket::P001 => "#cb181d",
    }
}

pub fn heatmap(data: &PairwiseMatrix, style: &Style) -> String {
    let mut s = style.svg();
    let metric = match data.metric {
        crate::stats::Metric::NL => "N^L",
        crate::stats::Metric::N => "N",
    };
    s.text(
        "title",
        style.width / 2.0,
        20.0,
        "middle",
        &format!("Pairwise K-S tests on {metric}"),
    );
    let k = data.conferences.len().saturating_sub(1).max(1) as f64;
    let cell = ((style.width - LABEL_W - MARGIN) / k).min((style.height - 2.0 * MARGIN) / k);
    let idx = |c: &crate::stats::ConferenceRef| data.conferences.iter().position(|x| x == c).unwrap_or(0);
    for (i, c) in data
        .conferences
        .iter()
        .enumerate()
        .take(data.conferences.len().saturating_sub(1))
    {
        s.text(
            "row-label",
            LABEL_W - 6.0,
            MARGIN + cell * (i as f64 + 0.5) + 4.0,
            "end",
            &c.to_string(),
        );
    }
    for (j, c) in data.conferences.iter().enumerate().skip(1) {
        s.text(
            "col-label",
            LABEL_W + cell * (j as f64 - 0.5),
            MARGIN - 6.0,
            "middle",
            &c.to_string(),
        );
    }
    for c in &data.cells {
        let (i, j) = (idx(&c.row), idx(&c.col));
        let (x, y) = (LABEL_W + cell * (j as f64 - 1.0), MARGIN + cell * i as f64);
        let title = format!(
            "{} vs {}: D={} p={} {}",
            c.row,
            c.col,
            num(c.ks_statistic),
            num(c.p_value),
            c.significance_bucket.label()
        );
        s.rect(
            "cell",
            x,
            y,
            cell,
            cell,
            bucket_fill(c.significance_bucket),
            Some(&title),
        );
        s.text(
            "annotation",
            x + cell / 2.0,
            y + cell / 2.0 + 4.0,
            "middle",
            &annot(c.mean_diff),
        );
    }
    s.finish()
}

/// Point on a circle, angle measured counter-clockwise from 12 o'clock.
fn polar(cx: f64, cy: f64, r: f64, theta: f64) -> (f64, f64) {
    (cx - r * theta.sin(), cy - r * theta.cos())
}

fn arc_path(cx: f64, cy: f64, r_in: f64, r_out: f64, t0: f64, t1: f64) -> String {
    let p = |r, t| {
        let (x, y) = polar(cx, cy, r, t);
        format!("{} {}", num(x), num(y))
    };
    let r = |r: f64| format!("{} {}", num(r), num(r));
    if t1 - t0 >= 2.0 * PI - 1e-9 {
        let mid = t0 + PI;
        return format!(
            "M {} A {} 0 0 0 {} A {} 0 0 0 {} L {} A {} 0 0 1 {} A {} 0 0 1 {} Z",
            p(r_out, t0),
            r(r_out),
            p(r_out, mid),
            r(r_out),
            p(r_out, t1),
            p(r_in, t1),
            r(r_in),
            p(r_in, mid),
            r(r_in),
            p(r_in, t0)
        );
    }
    let large = if t1 - t0 > PI { 1 } else { 0 };
    format!(
        "M {} A {} 0 {large} 0 {} L {} A {} 0 {large} 1 {} Z",
        p(r_out, t0),
        r(r_out),
        p(r_out, t1),
        p(r_in, t1),
        r(r_in),
        p(r_in, t0)
    )
}

fn depth(nodes: &[SunburstNode]) -> usize {
    nodes.iter().map(|n| 1 + depth(&n.children)).max().unwrap_or(0)
}

pub fn sunburst(data: &SunburstChart, style: &Style) -> String {
    let mut s = style.svg();
    s.text(
        "title",
        style.width / 2.0,
        20.0,
        "middle",
        &format!("Model composition: {}", data.scope),
    );
    let (cx, cy) = (style.width / 2.0, (style.height + MARGIN) / 2.0);
    let radius = (style.width.min(style.height - MARGIN) / 2.0 - 10.0).max(1.0);
    let hole = radius * 0.2;
    let ring = (radius - hole) / depth(&data.roots).max(1) as f64;

    struct Ctx<'a> {
        cx: f64,
        cy: f64,
        hole: f64,
        ring: f64,
        total: f64,
        colors: &'a ColorMap,
    }

    fn draw(s: &mut Svg, ctx: &Ctx, node: &SunburstNode, level: usize, t0: f64, t1: f64) {
        let r_in = ctx.hole + ctx.ring * level as f64;
        let fill = ctx.colors.get(&node.color_key);
        let title = format!(
            "{}: {} ({}%)",
            node.label,
            node.value,
            annot(100.0 * node.value as f64 / ctx.total)
        );
        s.path(
            "arc",
            &arc_path(ctx.cx, ctx.cy, r_in, r_in + ctx.ring, t0, t1),
            fill,
            Some(&title),
        );
        if t1 - t0 >= 0.3 {
            let (x, y) = polar(ctx.cx, ctx.cy, r_in + ctx.ring / 2.0, (t0 + t1) / 2.0);
            s.text("label", x, y + 4.0, "middle", &node.label);
        }
        let mut t = t0;
        for c in &node.children {
            let span = (t1 - t0) * c.value as f64 / node.value as f64;
            draw(s, ctx, c, level + 1, t, t + span);
            t += span;
        }
    }

    let ctx = Ctx {
        cx,
        cy,
        hole,
        ring,
        total: data.total as f64,
        colors: &style.colors,
    };
    let mut t = 0.0;
    for root in &data.roots {
        let span = 2.0 * PI * root.value as f64 / data.total as f64;
        draw(&mut s, &ctx, root, 0, t, t + span);
        t += span;
    }
    s.finish()
}

fn blend(v: f64) -> String {
    // white → #08519c
    let v = v.clamp(0.0, 1.0);
    let ch = |target: f64| (255.0 + (target - 255.0) * v).round() as u8;
    format!("#{:02x}{:02x}{:02x}", ch(8.0), ch(81.0), ch(156.0))
}

pub fn jaccard(data: &JaccardReport, style: &Style) -> String {
    let mut s = style.svg();
    s.text(
        "title",
        style.width / 2.0,
        20.0,
        "middle",
        &format!("Jaccard similarity ({})", data.mode.name()),
    );
    let n = data.conferences.len().max(1) as f64;
    let cell = ((style.width - LABEL_W - MARGIN) / n).min((style.height - 2.0 * MARGIN) / n);
    for (i, c) in data.conferences.iter().enumerate() {
        s.text(
            "row-label",
            LABEL_W - 6.0,
            MARGIN + cell * (i as f64 + 0.5) + 4.0,
            "end",
            &c.to_string(),
        );
        s.text(
            "col-label",
            LABEL_W + cell * (i as f64 + 0.5),
            MARGIN - 6.0,
            "middle",
            &c.to_string(),
        );
    }
    let idx = |c: &crate::stats::ConferenceRef| data.conferences.iter().position(|x| x == c).unwrap_or(0);
    for c in &data.cells {
        let (i, j) = (idx(&c.row), idx(&c.col));
        let (x, y) = (LABEL_W + cell * j as f64, MARGIN + cell * i as f64);
        s.rect(
            "cell",
            x,
            y,
            cell,
            cell,
            &blend(c.value),
            Some(&format!("{} vs {}: {}", c.row, c.col, num(c.value))),
        );
        s.text(
            "annotation",
            x + cell / 2.0,
            y + cell / 2.0 + 4.0,
            "middle",
            &annot(c.value),
        );
    }
    s.finish()
}

pub fn majority(data: &MajorityChart, style: &Style) -> String {
    let mut s = style.svg();
    let which = match data.selector {
        Selector::All => "all papers",
        Selector::TopQuarter => "top quarter by N^L",
    };
    s.text(
        "title",
        style.width / 2.0,
        20.0,
        "middle",
        &format!("Absolute-majority components ({which})"),
    );
    let n = data.bars.len().max(1) as f64;
    let bar_h = ((style.height - 2.0 * MARGIN) / n).min(40.0);
    let plot_w = style.width - LABEL_W - MARGIN;
    for (i, b) in data.bars.iter().enumerate() {
        let y = MARGIN + bar_h * i as f64;
        s.text(
            "row-label",
            LABEL_W - 6.0,
            y + bar_h / 2.0 + 4.0,
            "end",
            &b.scope.conference.to_string(),
        );
        let mut x = LABEL_W;
        for (root, &f) in &b.by_component {
            let w = plot_w * f;
            s.rect(
                "segment",
                x,
                y + 2.0,
                w,
                bar_h - 4.0,
                style.colors.get(root),
                Some(&format!("{root}: {}", num(f))),
            );
            x += w;
        }
        let w = plot_w * b.no_majority_fraction;
        s.rect(
            "segment none",
            x,
            y + 2.0,
            w,
            bar_h - 4.0,
            NEUTRAL,
            Some(&format!("no majority: {}", num(b.no_majority_fraction))),
        );
    }
    s.finish()
}

fn percent(delta: f64) -> String {
    let v = annot(100.0 * delta);
    if v.starts_with('-') || v == "0.00" {
        format!("{v}%")
    } else {
        format!("+{v}%")
    }
}

pub fn diverging(data: &DivergingChart, style: &Style) -> String {
    let mut s = style.svg();
    s.text("title", style.width / 2.0, 20.0, "middle", &data.title);
    let n = data.deltas.len().max(1) as f64;
    let bar_h = ((style.height - 2.0 * MARGIN) / n).min(28.0);
    let half = (style.width - LABEL_W - MARGIN) / 2.0;
    let zero = LABEL_W + half;
    let max = data
        .deltas
        .iter()
        .map(|d| d.delta.abs())
        .fold(0.0f64, f64::max)
        .max(1e-12);
    s.line(zero, MARGIN, zero, MARGIN + bar_h * n, "#333333");
    for (i, d) in data.deltas.iter().enumerate() {
        let y = MARGIN + bar_h * i as f64;
        let w = half * 0.9 * d.delta.abs() / max;
        let x = if d.delta < 0.0 { zero - w } else { zero };
        s.text("row-label", LABEL_W - 6.0, y + bar_h / 2.0 + 4.0, "end", &d.root);
        s.rect(
            "bar",
            x,
            y + 2.0,
            w,
            bar_h - 4.0,
            style.colors.get(&d.root),
            Some(&format!("{}: {}", d.root, num(d.delta))),
        );
        let (tx, anchor) = if d.delta < 0.0 {
            (x - 4.0, "end")
        } else {
            (x + w + 4.0, "start")
        };
        s.text("annotation", tx, y + bar_h / 2.0 + 4.0, anchor, &percent(d.delta));
    }
    s.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blend_endpoints() {
        assert_eq!(blend(0.0), "#ffffff");
        assert_eq!(blend(1.0), "#08519c");
    }

    #[test]
    fn percent_sign() {
        assert_eq!(percent(0.132), "+13.20%");
        assert_eq!(percent(-0.05), "-5.00%");
        assert_eq!(percent(-0.0), "0.00%");
    }

    #[test]
    fn full_circle_arc_is_two_halves() {
        let d = arc_path(0.0, 0.0, 1.0, 2.0, 0.0, 2.0 * PI);
        assert_eq!(d.matches(" A ").count(), 4);
        let d = arc_path(0.0, 0.0, 1.0, 2.0, 0.0, 1.0);
        assert_eq!(d.matches(" A ").count(), 2);
    }
}
