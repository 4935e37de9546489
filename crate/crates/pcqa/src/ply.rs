//! PLY reading and writing for colored point clouds.
//!
//! Reads `ascii`, `binary_little_endian` and `binary_big_endian` files. The
//! `vertex` element must carry `x`, `y`, `z` and `red`, `green`, `blue`;
//! `nx`, `ny`, `nz` are picked up when present. Other vertex properties and
//! other elements (faces, edges) are skipped.

use std::fmt;
use std::io::{self, BufRead, Read, Write};

use pcqa_core::{Color, RawCloud};

#[derive(Debug)]
pub struct PlyError {
    /// 1-based line of the offending header or ASCII data line.
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for PlyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for PlyError {}

impl From<io::Error> for PlyError {
    fn from(e: io::Error) -> Self {
        PlyError { line: None, message: e.to_string() }
    }
}

fn err<T>(line: Option<usize>, message: impl Into<String>) -> Result<T, PlyError> {
    Err(PlyError { line, message: message.into() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Ascii,
    BinaryLittleEndian,
    BinaryBigEndian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Scalar {
    I8,
    U8,
    I16,
    U16,
    I32,
    U32,
    F32,
    F64,
}

impl Scalar {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "char" | "int8" => Scalar::I8,
            "uchar" | "uint8" => Scalar::U8,
            "short" | "int16" => Scalar::I16,
            "ushort" | "uint16" => Scalar::U16,
            "int" | "int32" => Scalar::I32,
            "uint" | "uint32" => Scalar::U32,
            "float" | "float32" => Scalar::F32,
            "double" | "float64" => Scalar::F64,
            _ => return None,
        })
    }

    fn size(self) -> usize {
        match self {
            Scalar::I8 | Scalar::U8 => 1,
            Scalar::I16 | Scalar::U16 => 2,
            Scalar::I32 | Scalar::U32 | Scalar::F32 => 4,
            Scalar::F64 => 8,
        }
    }

    fn is_float(self) -> bool {
        matches!(self, Scalar::F32 | Scalar::F64)
    }

    fn decode(self, b: &[u8], big: bool) -> f64 {
        macro_rules! num {
            ($t:ty, $n:expr) => {{
                let mut a = [0u8; $n];
                a.copy_from_slice(&b[..$n]);
                f64::from(if big { <$t>::from_be_bytes(a) } else { <$t>::from_le_bytes(a) })
            }};
        }
        match self {
            Scalar::I8 => f64::from(b[0] as i8),
            Scalar::U8 => f64::from(b[0]),
            Scalar::I16 => num!(i16, 2),
            Scalar::U16 => num!(u16, 2),
            Scalar::I32 => num!(i32, 4),
            Scalar::U32 => num!(u32, 4),
            Scalar::F32 => num!(f32, 4),
            Scalar::F64 => num!(f64, 8),
        }
    }
}

#[derive(Debug, Clone)]
enum Property {
    Scalar { name: String, ty: Scalar },
    List { count: Scalar, item: Scalar },
}

#[derive(Debug, Clone)]
struct Element {
    name: String,
    count: usize,
    properties: Vec<Property>,
}

struct Header {
    format: Format,
    elements: Vec<Element>,
    lines: usize,
}

fn read_line(r: &mut impl BufRead, line_no: &mut usize) -> Result<Option<String>, PlyError> {
    let mut buf = Vec::new();
    if r.read_until(b'\n', &mut buf)? == 0 {
        return Ok(None);
    }
    *line_no += 1;
    let s = String::from_utf8(buf).or_else(|_| err(Some(*line_no), "header is not valid UTF-8"))?;
    Ok(Some(s.trim_end_matches(['\n', '\r']).to_string()))
}

fn parse_header(r: &mut impl BufRead) -> Result<Header, PlyError> {
    let mut line = 0;
    match read_line(r, &mut line)? {
        Some(s) if s.trim() == "ply" => {}
        _ => return err(Some(1), "missing 'ply' magic"),
    }
    let mut format = None;
    let mut elements: Vec<Element> = Vec::new();
    loop {
        let Some(text) = read_line(r, &mut line)? else {
            return err(Some(line), "unexpected end of file before end_header");
        };
        let words: Vec<&str> = text.split_whitespace().collect();
        match words.as_slice() {
            [] => {}
            ["comment", ..] | ["obj_info", ..] => {}
            ["format", f, _version] => {
                format = Some(match *f {
                    "ascii" => Format::Ascii,
                    "binary_little_endian" => Format::BinaryLittleEndian,
                    "binary_big_endian" => Format::BinaryBigEndian,
                    other => return err(Some(line), format!("unknown format '{other}'")),
                })
            }
            ["element", name, count] => {
                let count = count.parse().or_else(|_| err(Some(line), format!("bad element count '{count}'")))?;
                elements.push(Element { name: name.to_string(), count, properties: Vec::new() });
            }
            ["property", "list", count, item, _name] => {
                let (Some(count), Some(item)) = (Scalar::parse(count), Scalar::parse(item)) else {
                    return err(Some(line), format!("unknown list property types in '{text}'"));
                };
                let Some(el) = elements.last_mut() else {
                    return err(Some(line), "property before any element");
                };
                el.properties.push(Property::List { count, item });
            }
            ["property", ty, name] => {
                let Some(ty) = Scalar::parse(ty) else {
                    return err(Some(line), format!("unknown property type '{ty}'"));
                };
                let Some(el) = elements.last_mut() else {
                    return err(Some(line), "property before any element");
                };
                el.properties.push(Property::Scalar { name: name.to_string(), ty });
            }
            ["end_header"] => break,
            _ => return err(Some(line), format!("unrecognized header line '{text}'")),
        }
    }
    let Some(format) = format else {
        return err(Some(line), "missing format line");
    };
    Ok(Header { format, elements, lines: line })
}

/// Slots of the vertex properties we keep.
#[derive(Default)]
struct Layout {
    xyz: [Option<usize>; 3],
    rgb: [Option<usize>; 3],
    rgb_float: bool,
    normal: [Option<usize>; 3],
}

impl Layout {
    fn of(el: &Element, header_lines: usize) -> Result<Self, PlyError> {
        let mut l = Layout::default();
        for (i, p) in el.properties.iter().enumerate() {
            let Property::Scalar { name, ty } = p else { continue };
            match name.as_str() {
                "x" => l.xyz[0] = Some(i),
                "y" => l.xyz[1] = Some(i),
                "z" => l.xyz[2] = Some(i),
                "red" | "r" | "diffuse_red" => {
                    l.rgb[0] = Some(i);
                    l.rgb_float = ty.is_float();
                }
                "green" | "g" | "diffuse_green" => l.rgb[1] = Some(i),
                "blue" | "b" | "diffuse_blue" => l.rgb[2] = Some(i),
                "nx" => l.normal[0] = Some(i),
                "ny" => l.normal[1] = Some(i),
                "nz" => l.normal[2] = Some(i),
                _ => {}
            }
        }
        if l.xyz.iter().any(Option::is_none) {
            return err(Some(header_lines), "vertex element lacks x, y or z");
        }
        if l.rgb.iter().any(Option::is_none) {
            return err(Some(header_lines), "no color attributes (red, green, blue) on vertex element");
        }
        if l.normal.iter().any(Option::is_some) && l.normal.iter().any(Option::is_none) {
            return err(Some(header_lines), "incomplete normal attributes");
        }
        Ok(l)
    }

    fn has_normals(&self) -> bool {
        self.normal[0].is_some()
    }

    fn color(&self, v: f64) -> u8 {
        // float colors are intensities in [0, 1]
        let v = if self.rgb_float { v * 255.0 } else { v };
        v.round().clamp(0.0, 255.0) as u8
    }

    fn push(&self, values: &[f64], cloud: &mut RawCloud) {
        let get = |i: Option<usize>| values[i.unwrap_or(0)];
        cloud.positions.push([get(self.xyz[0]), get(self.xyz[1]), get(self.xyz[2])]);
        let color: Color = [self.color(get(self.rgb[0])), self.color(get(self.rgb[1])), self.color(get(self.rgb[2]))];
        cloud.colors.push(color);
        if let Some(n) = cloud.normals.as_mut() {
            n.push([get(self.normal[0]), get(self.normal[1]), get(self.normal[2])]);
        }
    }
}

/// Reads a PLY stream into a raw cloud.
pub fn read_ply(reader: impl Read) -> Result<RawCloud, PlyError> {
    let mut r = io::BufReader::new(reader);
    let header = parse_header(&mut r)?;
    let Some(vi) = header.elements.iter().position(|e| e.name == "vertex") else {
        return err(Some(header.lines), "no vertex element");
    };
    let layout = Layout::of(&header.elements[vi], header.lines)?;
    let vertex_count = header.elements[vi].count;
    let mut cloud = RawCloud {
        positions: Vec::with_capacity(vertex_count),
        colors: Vec::with_capacity(vertex_count),
        normals: layout.has_normals().then(|| Vec::with_capacity(vertex_count)),
    };
    match header.format {
        Format::Ascii => read_ascii(&mut r, &header, vi, &layout, &mut cloud)?,
        Format::BinaryLittleEndian => read_binary(&mut r, &header, vi, &layout, &mut cloud, false)?,
        Format::BinaryBigEndian => read_binary(&mut r, &header, vi, &layout, &mut cloud, true)?,
    }
    Ok(cloud)
}

fn read_ascii(
    r: &mut impl BufRead,
    header: &Header,
    vertex: usize,
    layout: &Layout,
    cloud: &mut RawCloud,
) -> Result<(), PlyError> {
    let mut line = header.lines;
    for (ei, el) in header.elements.iter().enumerate() {
        for _ in 0..el.count {
            let text = loop {
                match read_line(r, &mut line)? {
                    None => return err(Some(line), format!("unexpected end of file in element '{}'", el.name)),
                    Some(t) if t.trim().is_empty() => continue,
                    Some(t) => break t,
                }
            };
            if ei != vertex {
                continue;
            }
            let mut tokens = text.split_whitespace();
            let mut values = Vec::with_capacity(el.properties.len());
            for p in &el.properties {
                let mut next = || -> Result<f64, PlyError> {
                    let Some(tok) = tokens.next() else {
                        return err(Some(line), "too few values on vertex line");
                    };
                    tok.parse::<f64>().or_else(|_| err(Some(line), format!("bad number '{tok}'")))
                };
                match p {
                    Property::Scalar { .. } => values.push(next()?),
                    Property::List { .. } => {
                        let n = next()? as usize;
                        for _ in 0..n {
                            next()?;
                        }
                        values.push(0.0);
                    }
                }
            }
            if values.iter().any(|v| !v.is_finite()) {
                return err(Some(line), "non-finite value");
            }
            layout.push(&values, cloud);
        }
    }
    Ok(())
}

fn read_binary(
    r: &mut impl Read,
    header: &Header,
    vertex: usize,
    layout: &Layout,
    cloud: &mut RawCloud,
    big: bool,
) -> Result<(), PlyError> {
    let mut buf = [0u8; 8];
    let mut scalar = |r: &mut dyn Read, ty: Scalar| -> Result<f64, PlyError> {
        r.read_exact(&mut buf[..ty.size()]).or_else(|_| err(None, "unexpected end of binary data"))?;
        Ok(ty.decode(&buf, big))
    };
    for (ei, el) in header.elements.iter().enumerate() {
        let mut values = vec![0.0; el.properties.len()];
        for index in 0..el.count {
            for (slot, p) in el.properties.iter().enumerate() {
                match *p {
                    Property::Scalar { ty, .. } => values[slot] = scalar(r, ty)?,
                    Property::List { count, item } => {
                        let n = scalar(r, count)?;
                        for _ in 0..n as usize {
                            scalar(r, item)?;
                        }
                    }
                }
            }
            if ei == vertex {
                if values.iter().any(|v| !v.is_finite()) {
                    return err(None, format!("non-finite value in vertex {index}"));
                }
                layout.push(&values, cloud);
            }
        }
    }
    Ok(())
}

/// Writes a cloud. Coordinates go out as `float` when every value is exactly
/// representable in single precision, otherwise as `double`.
pub fn write_ply(mut w: impl Write, cloud: &RawCloud, format: Format) -> io::Result<()> {
    let single = cloud.positions.iter().flatten().all(|&c| f64::from(c as f32) == c)
        && cloud.normals.iter().flatten().flatten().all(|&c| f64::from(c as f32) == c);
    let ty = if single { "float" } else { "double" };
    let name = match format {
        Format::Ascii => "ascii",
        Format::BinaryLittleEndian => "binary_little_endian",
        Format::BinaryBigEndian => "binary_big_endian",
    };
    writeln!(w, "ply\nformat {name} 1.0\nelement vertex {}", cloud.len())?;
    for axis in ["x", "y", "z"] {
        writeln!(w, "property {ty} {axis}")?;
    }
    if cloud.normals.is_some() {
        for axis in ["nx", "ny", "nz"] {
            writeln!(w, "property {ty} {axis}")?;
        }
    }
    writeln!(w, "property uchar red\nproperty uchar green\nproperty uchar blue\nend_header")?;

    let mut w = io::BufWriter::new(w);
    for i in 0..cloud.len() {
        let mut floats: Vec<f64> = cloud.positions[i].to_vec();
        if let Some(n) = &cloud.normals {
            floats.extend_from_slice(&n[i]);
        }
        let c = cloud.colors[i];
        match format {
            Format::Ascii => {
                let mut parts: Vec<String> = floats.iter().map(|v| format!("{v}")).collect();
                parts.extend(c.iter().map(|v| v.to_string()));
                writeln!(w, "{}", parts.join(" "))?;
            }
            Format::BinaryLittleEndian | Format::BinaryBigEndian => {
                let big = format == Format::BinaryBigEndian;
                for v in floats {
                    if single {
                        let v = v as f32;
                        w.write_all(&if big { v.to_be_bytes() } else { v.to_le_bytes() })?;
                    } else {
                        w.write_all(&if big { v.to_be_bytes() } else { v.to_le_bytes() })?;
                    }
                }
                w.write_all(&c)?;
            }
        }
    }
    w.flush()
}
