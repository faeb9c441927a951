use std::collections::BTreeMap;
use std::fmt::Write;

/// Fixed 4-decimal formatting; negative zero prints as zero.
pub fn num(x: f64) -> String {
    let s = format!("{x:.4}");
    if s == "-0.0000" {
        "0.0000".into()
    } else {
        s
    }
}

/// Two-decimal annotation text, also without negative zero.
pub fn annot(x: f64) -> String {
    let s = format!("{x:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

pub fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

pub const PALETTE: [&str; 12] = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#17becf",
    "#bcbd22", "#8c564b",
];
pub const NEUTRAL: &str = "#bab0ac";

/// Root entry → color, assigned by position in the sorted root list.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ColorMap {
    colors: BTreeMap<String, String>,
}

impl ColorMap {
    pub fn new<I, S>(roots: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut roots: Vec<String> = roots.into_iter().map(Into::into).collect();
        roots.sort();
        roots.dedup();
        let colors = roots
            .into_iter()
            .enumerate()
            .map(|(i, r)| (r, PALETTE[i % PALETTE.len()].to_string()))
            .collect();
        Self { colors }
    }

    /// Unknown roots and `other` get the neutral color.
    pub fn get(&self, root: &str) -> &str {
        self.colors.get(root).map(String::as_str).unwrap_or(NEUTRAL)
    }
}

/// Minimal SVG document builder.
pub struct Svg {
    buf: String,
}

impl Svg {
    pub fn new(width: f64, height: f64, font_family: &str, font_size: f64) -> Self {
        let mut buf = String::new();
        writeln!(
            buf,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="{f}" font-size="{s}">"#,
            w = num(width),
            h = num(height),
            f = escape(font_family),
            s = num(font_size),
        )
        .unwrap();
        Self { buf }
    }

    #[allow(clippy::too_many_arguments)]
    pub fn rect(&mut self, class: &str, x: f64, y: f64, w: f64, h: f64, fill: &str, title: Option<&str>) {
        write!(
            self.buf,
            r#"<rect class="{class}" x="{}" y="{}" width="{}" height="{}" fill="{}""#,
            num(x),
            num(y),
            num(w.max(0.0)),
            num(h.max(0.0)),
            escape(fill)
        )
        .unwrap();
        self.close(title);
    }

    pub fn path(&mut self, class: &str, d: &str, fill: &str, title: Option<&str>) {
        write!(
            self.buf,
            r##"<path class="{class}" d="{d}" fill="{}" stroke="#ffffff" stroke-width="1""##,
            escape(fill)
        )
        .unwrap();
        self.close(title);
    }

    pub fn polyline(&mut self, class: &str, points: &[(f64, f64)], stroke: &str, dashed: bool) {
        let pts: Vec<String> = points.iter().map(|&(x, y)| format!("{},{}", num(x), num(y))).collect();
        writeln!(
            self.buf,
            r#"<polyline class="{class}" points="{}" fill="none" stroke="{}" stroke-width="2"{}/>"#,
            pts.join(" "),
            escape(stroke),
            if dashed { r#" stroke-dasharray="4 3""# } else { "" }
        )
        .unwrap();
    }

    pub fn circle(&mut self, class: &str, cx: f64, cy: f64, r: f64, fill: &str, title: Option<&str>) {
        write!(
            self.buf,
            r#"<circle class="{class}" cx="{}" cy="{}" r="{}" fill="{}""#,
            num(cx),
            num(cy),
            num(r),
            escape(fill)
        )
        .unwrap();
        self.close(title);
    }

    pub fn line(&mut self, x1: f64, y1: f64, x2: f64, y2: f64, stroke: &str) {
        writeln!(
            self.buf,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}" stroke-width="1"/>"#,
            num(x1),
            num(y1),
            num(x2),
            num(y2),
            escape(stroke)
        )
        .unwrap();
    }

    /// `anchor` is one of start, middle, end.
    pub fn text(&mut self, class: &str, x: f64, y: f64, anchor: &str, content: &str) {
        writeln!(
            self.buf,
            r#"<text class="{class}" x="{}" y="{}" text-anchor="{anchor}">{}</text>"#,
            num(x),
            num(y),
            escape(content)
        )
        .unwrap();
    }

    fn close(&mut self, title: Option<&str>) {
        match title {
            Some(t) => {
                let tag = self.last_tag().to_string();
                writeln!(self.buf, "><title>{}</title></{tag}>", escape(t)).unwrap()
            }
            None => self.buf.push_str("/>\n"),
        }
    }

    fn last_tag(&self) -> &str {
        let start = self.buf.rfind('<').expect("open tag") + 1;
        let rest = &self.buf[start..];
        &rest[..rest.find(' ').unwrap_or(rest.len())]
    }

    pub fn finish(mut self) -> String {
        self.buf.push_str("</svg>\n");
        self.buf
    }
}
