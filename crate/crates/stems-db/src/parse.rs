use crate::{
    parse_class, Alias, DbError, Generator, HopfInvariantEntry, HopfKind, Line, Order, StemVector,
    StemsDb, UnstableGroup,
};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Stems,
    Aliases,
    Products,
    Shi,
    Hi,
    Ghi,
    Unstable,
}

fn perr(line: usize, field: &str) -> DbError {
    DbError::ParseError {
        line,
        field: field.to_string(),
    }
}

pub(crate) fn load(source: &str) -> Result<StemsDb, DbError> {
    let mut db = StemsDb::default();
    let mut section = None;
    // Products and Hopf records may mention aliases defined later, so
    // cross-references are resolved after the whole file is read.
    let mut deferred = Vec::new();
    for (i, raw) in source.lines().enumerate() {
        let line = i + 1;
        let (body, comment) = match raw.find('#') {
            Some(p) => (&raw[..p], raw[p + 1..].trim()),
            None => (raw, ""),
        };
        let body = body.trim();
        if body.is_empty() {
            continue;
        }
        if let Some(name) = body.strip_prefix('[').and_then(|b| b.strip_suffix(']')) {
            section = Some(match name {
                "stems" => Section::Stems,
                "aliases" => Section::Aliases,
                "products" => Section::Products,
                "shi" => Section::Shi,
                "hi" => Section::Hi,
                "ghi" => Section::Ghi,
                "unstable-groups" => Section::Unstable,
                _ => return Err(perr(line, "section header")),
            });
            continue;
        }
        match section.ok_or_else(|| perr(line, "record outside a section"))? {
            Section::Stems => stem_record(&mut db, line, body)?,
            Section::Unstable => unstable_record(&mut db, line, body)?,
            s => deferred.push((s, line, body.to_string(), comment.to_string())),
        }
    }
    for (s, line, body, _) in &deferred {
        if *s == Section::Aliases {
            alias_record(&mut db, *line, body)?;
        }
    }
    for (s, line, body, comment) in deferred {
        match s {
            Section::Products => product_record(&mut db, line, &body)?,
            Section::Shi | Section::Hi | Section::Ghi => hopf_record(&mut db, s, line, &body, comment)?,
            _ => {}
        }
    }
    Ok(db)
}

fn stem_record(db: &mut StemsDb, line: usize, body: &str) -> Result<(), DbError> {
    let fields: Vec<&str> = body.split_whitespace().collect();
    let [stem, name, order] = fields[..] else {
        return Err(perr(line, "stem record"));
    };
    let stem: i64 = stem.parse().map_err(|_| perr(line, "stem"))?;
    let order = match order {
        "inf" => Order::Infinite,
        m => Order::Finite(m.parse().map_err(|_| perr(line, "order"))?),
    };
    if order == Order::Infinite && stem != 0 {
        return Err(perr(line, "order (only the 0-stem may be infinite)"));
    }
    if matches!(order, Order::Finite(0)) {
        return Err(perr(line, "order"));
    }
    if db.by_name.contains_key(name) {
        return Err(perr(line, "generator name (duplicate)"));
    }
    let id = db.generators.len();
    db.generators.push(Generator {
        name: name.to_string(),
        stem,
        order,
    });
    db.by_name.insert(name.to_string(), id);
    db.by_stem.entry(stem).or_default().push(id);
    Ok(())
}

fn alias_record(db: &mut StemsDb, line: usize, body: &str) -> Result<(), DbError> {
    let (name, rhs) = body.split_once('=').ok_or_else(|| perr(line, "alias"))?;
    let name = name.trim();
    let mut rhs = rhs.trim();
    let display = match rhs.strip_suffix("display") {
        Some(r) => {
            rhs = r.trim();
            true
        }
        None => false,
    };
    let mut vector = StemVector::zero();
    let mut stem = None;
    for term in rhs.split('+') {
        let (gen, offset) = term.trim().split_once('@').ok_or_else(|| perr(line, "alias term"))?;
        let &g = db.by_name.get(gen.trim()).ok_or_else(|| DbError::DanglingReference {
            line,
            name: gen.trim().to_string(),
        })?;
        let offset: u32 = offset.trim().parse().map_err(|_| perr(line, "alias offset"))?;
        let generator = &db.generators[g];
        if !generator.order.admits(offset) {
            return Err(perr(line, "alias offset (exceeds order)"));
        }
        if stem.is_some_and(|s| s != generator.stem) {
            return Err(perr(line, "alias terms (mixed stems)"));
        }
        stem = Some(generator.stem);
        vector.add_line(Line { gen: g, offset });
    }
    if db.by_name.contains_key(name) || db.aliases.contains_key(name) {
        return Err(perr(line, "alias name (duplicate)"));
    }
    db.aliases.insert(
        name.to_string(),
        Alias {
            stem: stem.ok_or_else(|| perr(line, "alias"))?,
            vector,
            display,
        },
    );
    Ok(())
}

fn resolve_at(db: &StemsDb, line: usize, name: &str) -> Result<crate::Resolved, DbError> {
    db.resolve(name).map_err(|_| DbError::DanglingReference {
        line,
        name: name.to_string(),
    })
}

fn product_record(db: &mut StemsDb, line: usize, body: &str) -> Result<(), DbError> {
    let (lhs, rhs) = body.split_once('=').ok_or_else(|| perr(line, "product"))?;
    let (a, b) = lhs.split_once('*').ok_or_else(|| perr(line, "product"))?;
    let (a, b, rhs) = (a.trim(), b.trim(), rhs.trim());
    let ra = resolve_at(db, line, a)?;
    let rb = resolve_at(db, line, b)?;
    let value = match rhs {
        "0" => None,
        "?" => return Ok(()),
        name => {
            let r = resolve_at(db, line, name)?;
            if r.stem != ra.stem + rb.stem {
                return Err(perr(line, "product result (stems do not add)"));
            }
            Some(name.to_string())
        }
    };
    db.products.insert((a.to_string(), b.to_string()), value);
    Ok(())
}

fn hopf_record(
    db: &mut StemsDb,
    section: Section,
    line: usize,
    body: &str,
    comment: String,
) -> Result<(), DbError> {
    let (lhs, rhs) = body.split_once('=').ok_or_else(|| perr(line, "Hopf invariant record"))?;
    let mut lhs = lhs.trim();
    let mut sphere = None;
    if section == Section::Ghi {
        let (s, rest) = lhs.split_once(' ').ok_or_else(|| perr(line, "sphere"))?;
        let n = s.strip_prefix('S').and_then(|n| n.parse().ok());
        sphere = Some(n.ok_or_else(|| perr(line, "sphere"))?);
        lhs = rest.trim();
    }
    let element = parse_class(lhs).map_err(|_| perr(line, "element"))?;
    let target = parse_class(rhs.trim()).map_err(|_| perr(line, "invariant"))?;
    let cell = target.cell.clone().ok_or_else(|| perr(line, "invariant cell"))?;
    let re = resolve_at(db, line, &element.name)?;
    let rt = resolve_at(db, line, &target.name)?;
    let norm: i64 = cell.iter().sum();
    let len = cell.len() as i64;
    let consistent = match section {
        // The 0-column d1 lowers the chart row (stem + ‖J‖ − |J|) by one.
        Section::Shi | Section::Ghi => re.stem - 1 == rt.stem + norm - len,
        // The TEHPSS grade of β[J,m] is stem(β) + ‖J‖ + m − |J|.
        _ => re.stem == rt.stem + norm - (len - 1),
    };
    if !consistent {
        return Err(perr(line, "invariant cell (degree mismatch)"));
    }
    let entry = HopfInvariantEntry {
        kind: match section {
            Section::Shi => HopfKind::Shi,
            Section::Hi => HopfKind::Hi,
            _ => HopfKind::Ghi,
        },
        element: lhs.to_string(),
        sphere,
        coefficient: target.name.clone(),
        cell,
        provenance: comment,
    };
    let key = (re.stem, re.vector);
    let dup = match section {
        Section::Shi => db.shi.insert(key, entry).is_some(),
        Section::Hi => db.hi.insert(key, entry).is_some(),
        _ => db.ghi.insert((sphere.unwrap(), key), entry).is_some(),
    };
    if dup {
        return Err(perr(line, "element (duplicate record)"));
    }
    Ok(())
}

fn unstable_record(db: &mut StemsDb, line: usize, body: &str) -> Result<(), DbError> {
    let (lhs, group) = body.split_once('=').ok_or_else(|| perr(line, "unstable group"))?;
    let fields: Vec<&str> = lhs.split_whitespace().collect();
    let [sphere, range] = fields[..] else {
        return Err(perr(line, "unstable group"));
    };
    let sphere: i64 = sphere
        .strip_prefix('S')
        .and_then(|n| n.parse().ok())
        .ok_or_else(|| perr(line, "sphere"))?;
    let (lo, hi) = match range.split_once("..") {
        Some((a, b)) => (a.parse(), b.parse()),
        None => (range.parse(), range.parse()),
    };
    let (lo, hi): (i64, i64) = (lo.map_err(|_| perr(line, "t"))?, hi.map_err(|_| perr(line, "t"))?);
    for t in lo..=hi {
        db.unstable.push(UnstableGroup {
            sphere,
            t,
            group: group.trim().to_string(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;

    #[test]
    fn errors_carry_line_numbers() {
        let src = "[stems]\n0 1 inf\n1 η x\n";
        assert!(matches!(load(src), Err(DbError::ParseError { line: 3, .. })));
        let src = "[stems]\n1 η inf\n";
        assert!(matches!(load(src), Err(DbError::ParseError { line: 2, .. })));
        let src = "[stems]\n0 1 inf\n[aliases]\nx = ζ@0\n";
        assert_eq!(
            load(src).unwrap_err(),
            DbError::DanglingReference { line: 4, name: "ζ".into() }
        );
        let src = "[stems]\n0 1 inf\n1 η 1\n[shi]\nη = 1[2]\n";
        assert!(matches!(load(src), Err(DbError::ParseError { line: 5, .. })));
        let src = "[bogus]\n";
        assert!(matches!(load(src), Err(DbError::ParseError { line: 1, .. })));
    }

    #[test]
    fn unstable_ranges() {
        let db = load("[unstable-groups]\nS1 1 = Z\nS1 2..4 = 0\n").unwrap();
        assert_eq!(db.unstable_groups().len(), 4);
    }

    #[test]
    fn stems_are_sorted_by_key() {
        let db = StemsDb::bundled();
        let stems: BTreeMap<i64, usize> = db.generators().iter().fold(BTreeMap::new(), |mut m, g| {
            *m.entry(g.stem).or_default() += 1;
            m
        });
        assert_eq!(stems.keys().next_back(), Some(&22));
        assert_eq!(stems[&9], 3);
    }
}
