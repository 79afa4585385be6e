//! Parsers for comma-separated command-line values.

use regquat::analysis::{GridSpec, ProbeTargets, Region};
use regquat::{ImaginaryUnit, Quaternion, Sphere2};

fn numbers(s: &str, n: usize, what: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != n {
        return Err(format!(
            "expected {what} ({n} comma-separated numbers), got '{s}'"
        ));
    }
    parts
        .iter()
        .map(|p| match p.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(format!("'{p}' is not a finite number in '{s}'")),
        })
        .collect()
}

pub fn quaternion(s: &str) -> Result<Quaternion, String> {
    let v = numbers(s, 4, "W,X,Y,Z")?;
    Ok(Quaternion::new(v[0], v[1], v[2], v[3]))
}

pub fn unit(s: &str) -> Result<ImaginaryUnit, String> {
    let v = numbers(s, 3, "U1,U2,U3")?;
    ImaginaryUnit::new(v[0], v[1], v[2]).map_err(|e| e.to_string())
}

pub fn sphere(s: &str) -> Result<Sphere2, String> {
    let v = numbers(s, 2, "X,Y")?;
    Ok(Sphere2::new(v[0], v[1]))
}

pub fn grid(s: &str) -> Result<GridSpec, String> {
    let v = numbers(s, 6, "X0,X1,Y0,Y1,NX,NY")?;
    let count = |c: f64| {
        if c.fract() == 0.0 && c >= 0.0 {
            Ok(c as usize)
        } else {
            Err(format!("grid sample counts must be whole numbers, got {c}"))
        }
    };
    GridSpec::new([v[0], v[1]], [v[2], v[3]], count(v[4])?, count(v[5])?).map_err(|e| e.to_string())
}

/// `ball:W,X,Y,Z,R` or `circular:X,Y,R`.
pub fn region(s: &str) -> Result<Region, String> {
    match s.split_once(':') {
        Some(("ball", rest)) => {
            let v = numbers(rest, 5, "ball:W,X,Y,Z,R")?;
            Ok(Region::Ball {
                center: Quaternion::new(v[0], v[1], v[2], v[3]),
                radius: v[4],
            })
        }
        Some(("circular", rest)) => {
            let v = numbers(rest, 3, "circular:X,Y,R")?;
            Ok(Region::Circular {
                sphere: Sphere2::new(v[0], v[1]),
                radius: v[2],
            })
        }
        _ => Err(format!(
            "expected ball:W,X,Y,Z,R or circular:X,Y,R, got '{s}'"
        )),
    }
}

/// `ball` or `segment:W,X,Y,Z`.
pub fn targets(s: &str) -> Result<ProbeTargets, String> {
    match s.split_once(':') {
        None if s == "ball" => Ok(ProbeTargets::Ball),
        Some(("segment", rest)) => Ok(ProbeTargets::Segment {
            direction: quaternion(rest)?,
        }),
        _ => Err(format!("expected ball or segment:W,X,Y,Z, got '{s}'")),
    }
}

/// `FIELD=VALUE`.
pub fn assignment(s: &str) -> Result<(String, String), String> {
    s.split_once('=')
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .ok_or_else(|| format!("expected FIELD=VALUE, got '{s}'"))
}
