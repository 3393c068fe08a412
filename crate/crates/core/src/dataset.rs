//! Built-in health tables (2012-2016) and wide-format CSV ingestion.
//!
//! CSV layout: first header cell is literally `name`, the remaining header
//! cells are consecutive integer years. Each data row is one series; an
//! empty cell is a missing observation.

use std::collections::HashSet;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{ArimaError, Result};
use crate::series::Series;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub title: String,
    pub start_year: i32,
    pub series: Vec<Series>,
}

impl Dataset {
    /// Checks the shared year axis and name uniqueness.
    pub fn new(title: impl Into<String>, series: Vec<Series>) -> Result<Self> {
        let title = title.into();
        let first =
            series.first().ok_or_else(|| ArimaError::InvalidSpec(format!("dataset '{title}' has no series")))?;
        let (start_year, len) = (first.start_year(), first.len());
        let mut names = HashSet::new();
        for s in &series {
            if s.start_year() != start_year || s.len() != len {
                return Err(ArimaError::InvalidSpec(format!(
                    "series '{}' does not share the dataset year axis",
                    s.name()
                )));
            }
            if !names.insert(s.name()) {
                return Err(ArimaError::InvalidSpec(format!("duplicate series name '{}'", s.name())));
            }
        }
        Ok(Self { title, start_year, series })
    }

    pub fn get(&self, name: &str) -> Option<&Series> {
        self.series.iter().find(|s| s.name() == name)
    }

    pub fn names(&self) -> Vec<&str> {
        self.series.iter().map(Series::name).collect()
    }

    pub fn years(&self) -> Vec<i32> {
        let len = self.series[0].len() as i32;
        (self.start_year..self.start_year + len).collect()
    }
}

// ---------------------------------------------------------------------------
// Built-in tables
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableId {
    Deaths,
    Morbidity,
    InfantDeaths,
}

impl TableId {
    pub const ALL: [TableId; 3] = [TableId::Deaths, TableId::Morbidity, TableId::InfantDeaths];

    pub fn as_str(&self) -> &'static str {
        match self {
            TableId::Deaths => "deaths",
            TableId::Morbidity => "morbidity",
            TableId::InfantDeaths => "infant_deaths",
        }
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TableId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        TableId::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| format!("unknown table '{s}' (expected deaths, morbidity or infant_deaths)"))
    }
}

const BUILTIN_START: i32 = 2012;

type Row = (&'static str, [Option<f64>; 5]);

const fn full(v: [f64; 5]) -> [Option<f64>; 5] {
    [Some(v[0]), Some(v[1]), Some(v[2]), Some(v[3]), Some(v[4])]
}

const DEATHS: [Row; 10] = [
    ("Diseases of the heart", full([112581., 118740., 125906., 68572., 74134.])),
    ("Diseases of the vascular system", full([68826., 68325., 69913., 58715., 60470.])),
    ("malignant neoplasms", full([50507., 53601., 56219., 49595., 57809.])),
    ("pneumonia", full([50144., 53101., 54877., 58310., 56938.])),
    ("accidents", full([36375., 40071., 43853., 34506., 33452.])),
    ("diabetes mellitus", full([22910., 27064., 31687., 34050., 33295.])),
    ("chronic lower respiratory diseases", full([24275., 23867., 52114., 31729., 28641.])),
    ("tuberculosis, all forms", full([22693., 23216., 24929., 24644., 24642.])),
    ("nephritis, nephrotic syndrome and nephrosis", full([13555., 14954., 15359., 23760., 24365.])),
    ("certain conditions originating in perinatal period", full([11374., 10436., 10174., 18061., 19759.])),
];

const MORBIDITY: [Row; 11] = [
    ("Acute respiratory infection", full([2793066., 2174740., 1445320., 2115018., 3080343.])),
    ("ALTRI and pneumonia", full([569122., 674597., 488415., 474406., 786085.])),
    ("Hypertension", full([512604., 410432., 475693., 601173., 886203.])),
    ("Bronchitis", full([338789., 249173., 204086., 202343., 200176.])),
    ("Influenza", full([232584., 149777., 172683., 147400., 216074.])),
    ("Urinary tract infection", full([276442., 235446., 213666., 298200., 288588.])),
    ("Acute watery diarrhea", full([235110., 74876., 91202., 130246., 139700.])),
    ("TB respiratory", full([93094., 70053., 32335., 62396., 87422.])),
    ("Acute febrile illness", [Some(85471.), None, None, Some(55759.), None]),
    ("Dengue fever", full([44172., 53750., 26077., 69532., 56487.])),
    ("TB other forms", [None, Some(30971.), Some(25727.), None, None]),
];

const INFANT_DEATHS: [Row; 12] = [
    ("All causes", full([22283., 22254., 21992., 20750., 21874.])),
    ("Bacterial sepsis of new-born", full([3669., 3156., 2731., 2157., 2136.])),
    ("Pneumonia", full([2792., 2738., 3146., 2370., 2885.])),
    ("Respiratory distress of new-born", full([2414., 2497., 2347., 2276., 2263.])),
    ("Congenital malformation of the heart", full([1452., 1356., 1383., 1398., 1407.])),
    (
        "Disorder related to short gestation and low birth weight, not elsewhere classified",
        full([1455., 1422., 1466., 1278., 1202.]),
    ),
    ("Congenital pneumonia", full([1115., 989., 728., 625., 734.])),
    ("Neonatal aspiration syndromes", full([1104., 994., 969., 1036., 1196.])),
    ("Intrauterine hypoxia and birth asphyxia", full([906., 871., 838., 802., 832.])),
    ("Other congenital malformations", full([883., 896., 895., 1030., 1000.])),
    ("Diarrhea and gastroenteritis of presumed infectious origin", full([911., 843., 901., 824., 1328.])),
    ("All other causes", full([5582., 6492., 6588., 6954., 6891.])),
];

/// The table as printed, blank cells kept as missing.
pub fn builtin(table: TableId) -> Dataset {
    let (title, rows): (&str, &[Row]) = match table {
        TableId::Deaths => ("Ten leading causes of death", &DEATHS),
        TableId::Morbidity => ("Leading causes of morbidity", &MORBIDITY),
        TableId::InfantDeaths => ("Leading causes of infant deaths", &INFANT_DEATHS),
    };
    let series = rows
        .iter()
        .map(|(name, vals)| Series::new(*name, BUILTIN_START, vals.to_vec()).expect("static table"))
        .collect();
    Dataset::new(title, series).expect("static table")
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

/// Parses a wide CSV. Rows and columns in errors are 1-based, the header
/// being row 1.
pub fn read_csv<R: Read>(source: R, title: &str) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(source);
    let mut records = reader.records();

    let header = match records.next() {
        Some(rec) => rec.map_err(|e| csv_error(e, 1))?,
        None => return Err(ArimaError::Parse { row: 1, col: 1, msg: "empty input".into() }),
    };
    let first = header.get(0).map(|h| h.trim_start_matches('\u{feff}').trim());
    if first != Some("name") {
        return Err(ArimaError::Parse { row: 1, col: 1, msg: "first header must be 'name'".into() });
    }
    if header.len() < 2 {
        return Err(ArimaError::Parse { row: 1, col: 2, msg: "no year columns".into() });
    }
    let mut years = Vec::with_capacity(header.len() - 1);
    for (i, cell) in header.iter().enumerate().skip(1) {
        let year: i32 = cell.trim().parse().map_err(|_| ArimaError::Parse {
            row: 1,
            col: i + 1,
            msg: format!("'{cell}' is not an integer year"),
        })?;
        if let Some(prev) = years.last() {
            if year != prev + 1 {
                return Err(ArimaError::Parse {
                    row: 1,
                    col: i + 1,
                    msg: format!("non-consecutive years: {prev} then {year}"),
                });
            }
        }
        years.push(year);
    }

    let mut series = Vec::new();
    let mut names = HashSet::new();
    for (idx, rec) in records.enumerate() {
        let row = idx + 2;
        let rec = rec.map_err(|e| csv_error(e, row))?;
        if rec.len() != header.len() {
            return Err(ArimaError::Parse {
                row,
                col: rec.len().min(header.len()) + 1,
                msg: format!("expected {} fields, found {}", header.len(), rec.len()),
            });
        }
        let name = rec[0].to_string();
        if name.trim().is_empty() {
            return Err(ArimaError::Parse { row, col: 1, msg: "empty series name".into() });
        }
        if !names.insert(name.clone()) {
            return Err(ArimaError::Parse { row, col: 1, msg: format!("duplicate series name '{name}'") });
        }
        let mut values = Vec::with_capacity(years.len());
        for (i, cell) in rec.iter().enumerate().skip(1) {
            let cell = cell.trim();
            if cell.is_empty() {
                values.push(None);
                continue;
            }
            match cell.parse::<f64>() {
                Ok(v) if v.is_finite() => values.push(Some(v)),
                _ => return Err(ArimaError::Parse { row, col: i + 1, msg: format!("'{cell}' is not a number") }),
            }
        }
        series.push(Series::new(name, years[0], values)?);
    }
    if series.is_empty() {
        return Err(ArimaError::Parse { row: 2, col: 1, msg: "no data rows".into() });
    }
    Dataset::new(title, series)
}

fn csv_error(e: csv::Error, row: usize) -> ArimaError {
    ArimaError::Parse { row, col: 1, msg: e.to_string() }
}

/// Writes the dataset in the wide layout with LF line endings; names are
/// quoted only when they need it. Values use the shortest representation
/// that parses back to the same `f64`.
pub fn write_csv<W: Write>(dataset: &Dataset, sink: W) -> Result<()> {
    let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(sink);
    let io = |e: csv::Error| ArimaError::Io(e.to_string());

    let mut header = vec!["name".to_string()];
    header.extend(dataset.years().iter().map(i32::to_string));
    writer.write_record(&header).map_err(io)?;
    for s in &dataset.series {
        let mut rec = vec![s.name().to_string()];
        rec.extend(s.values().iter().map(|v| v.map(|x| x.to_string()).unwrap_or_default()));
        writer.write_record(&rec).map_err(io)?;
    }
    writer.flush().map_err(|e| ArimaError::Io(e.to_string()))
}

pub fn to_csv_string(dataset: &Dataset) -> String {
    let mut buf = Vec::new();
    write_csv(dataset, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("utf-8 input")
}
