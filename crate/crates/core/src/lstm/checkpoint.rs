use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::config::LstmConfig;
use super::data::MinMaxScaler;
use super::network::Params;
use super::train::LstmModel;
use crate::error::{Error, Result};

const FORMAT: &str = "sectorfolio-lstm-checkpoint";
const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tensor {
    pub name: String,
    pub shape: Vec<usize>,
    pub data: Vec<f64>,
}

/// Self-describing JSON document holding a trained model. Values are
/// written as shortest round-trip decimals, so a reloaded model is
/// bit-identical at f64 precision.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub format: String,
    pub version: u32,
    pub precision: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ticker: Option<String>,
    pub config: LstmConfig,
    pub scaler: MinMaxScaler,
    pub tensors: Vec<Tensor>,
}

impl Checkpoint {
    pub fn from_model(model: &LstmModel, ticker: Option<&str>) -> Self {
        Self {
            format: FORMAT.into(),
            version: VERSION,
            precision: "f64".into(),
            ticker: ticker.map(str::to_string),
            config: model.config.clone(),
            scaler: model.scaler,
            tensors: model
                .params
                .tensors()
                .into_iter()
                .map(|(name, shape, data)| Tensor {
                    name,
                    shape,
                    data: data.to_vec(),
                })
                .collect(),
        }
    }

    pub fn into_model(self) -> Result<LstmModel> {
        if self.format != FORMAT || self.version != VERSION {
            return Err(Error::Shape(format!(
                "unsupported checkpoint {} v{}",
                self.format, self.version
            )));
        }
        self.config.validate()?;
        let scaler = MinMaxScaler::new(self.scaler.min, self.scaler.max)?;
        let mut params = Params::zeros(&self.config);
        let expected = params.tensors().into_iter().map(|(n, s, _)| (n, s)).collect::<Vec<_>>();
        if expected.len() != self.tensors.len() {
            return Err(Error::Shape(format!(
                "checkpoint has {} tensors, config implies {}",
                self.tensors.len(),
                expected.len()
            )));
        }
        for ((name, shape), t) in expected.iter().zip(&self.tensors) {
            let len: usize = shape.iter().product();
            if &t.name != name || &t.shape != shape || t.data.len() != len {
                return Err(Error::Shape(format!(
                    "tensor {} {:?} does not match expected {} {:?}",
                    t.name, t.shape, name, shape
                )));
            }
        }
        for (dst, t) in params.tensors_mut().into_iter().zip(&self.tensors) {
            dst.copy_from_slice(&t.data);
        }
        Ok(LstmModel {
            config: self.config,
            scaler,
            params,
        })
    }

    pub fn write<W: Write>(&self, writer: W) -> Result<()> {
        serde_json::to_writer(writer, self)?;
        Ok(())
    }

    pub fn read<R: Read>(reader: R) -> Result<Self> {
        Ok(serde_json::from_reader(reader)?)
    }
}
