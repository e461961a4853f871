#pragma once

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "molprop/csv.hpp"
#include "molprop/log.hpp"
#include "molprop/smiles.hpp"

namespace molprop::pipeline {

// Column schema and source location for one benchmark dataset. The defaults
// match the published MoleculeNet file layouts; a config file can override
// the column names when a local file uses different headers.
struct DatasetSchema {
  std::string name;
  std::string smiles_column;
  std::string target_column;
  std::string target_label;
  std::string units;
  std::string url;
  std::size_t expected_rows = 0;  // source-table row count, pre-filtering
};

inline const std::vector<DatasetSchema>& dataset_registry() {
  static const std::vector<DatasetSchema> reg = {
      {"esol", "smiles", "measured log solubility in mols per litre", "LogS", "log(mol/L)",
       "https://deepchemdata.s3-us-west-1.amazonaws.com/datasets/delaney-processed.csv", 1128},
      {"sampl", "smiles", "expt", "DeltaG_hyd", "kcal/mol",
       "https://deepchemdata.s3-us-west-1.amazonaws.com/datasets/SAMPL.csv", 642},
      {"bace", "mol", "pIC50", "pIC50", "-",
       "https://deepchemdata.s3-us-west-1.amazonaws.com/datasets/bace.csv", 1513},
      {"logp_experimental", "smiles", "exp", "LogP", "-",
       "https://deepchemdata.s3-us-west-1.amazonaws.com/datasets/Lipophilicity.csv", 753},
      {"logp_synthetic", "smiles", "logP", "LogP", "-",
       "https://raw.githubusercontent.com/Mariewelt/OpenChem/master/benchmark_datasets/"
       "logp_dataset/logP_labels.csv",
       14610},
  };
  return reg;
}

inline std::string supported_dataset_names() {
  std::string names;
  for (const auto& s : dataset_registry()) names += (names.empty() ? "" : ", ") + s.name;
  return names;
}

inline const DatasetSchema& dataset_schema(const std::string& name) {
  for (const auto& s : dataset_registry())
    if (s.name == name) return s;
  throw std::invalid_argument("unknown dataset '" + name + "'; supported: " +
                              supported_dataset_names() +
                              " (or pass a local CSV path with an explicit schema)");
}

inline std::filesystem::path cache_dir() {
  if (const char* env = std::getenv("MOLPROP_CACHE_DIR")) return env;
  return "molprop_data";
}

struct DatasetRecord {
  std::string smiles;
  Molecule mol;
  double target = 0.0;
};

struct Dataset {
  std::string name;
  std::string target_label;
  std::string units;
  std::vector<DatasetRecord> records;
  std::size_t loaded_rows = 0;  // CSV rows before validation
  std::vector<RejectedRecord> rejected;

  std::vector<double> targets() const {
    std::vector<double> t;
    t.reserve(records.size());
    for (const auto& r : records) t.push_back(r.target);
    return t;
  }
};

// Load a CSV and run every row through the SMILES validator. Parse errors
// and sub-2-atom molecules become rejection records, not failures.
inline Dataset load_dataset(const std::string& path, const DatasetSchema& schema) {
  const csv::Table table = csv::read_file(path);
  const int smiles_col = table.column(schema.smiles_column);
  if (smiles_col < 0)
    throw std::runtime_error("dataset " + schema.name + ": missing column '" +
                             schema.smiles_column + "' in " + path);
  const int target_col = table.column(schema.target_column);
  if (target_col < 0)
    throw std::runtime_error("dataset " + schema.name + ": missing column '" +
                             schema.target_column + "' in " + path);

  Dataset ds;
  ds.name = schema.name;
  ds.target_label = schema.target_label;
  ds.units = schema.units;
  ds.loaded_rows = table.rows.size();

  std::vector<std::pair<std::string, double>> rows;
  rows.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    const std::string& smi = row[static_cast<std::size_t>(smiles_col)];
    double target;
    try {
      target = std::stod(row[static_cast<std::size_t>(target_col)]);
    } catch (const std::exception&) {
      ds.rejected.push_back({smi, "unparseable target value"});
      continue;
    }
    if (!std::isfinite(target)) {
      ds.rejected.push_back({smi, "non-finite target value"});
      continue;
    }
    rows.emplace_back(smi, target);
  }

  auto filtered = validate_and_filter(rows);
  ds.records.reserve(filtered.accepted.size());
  for (auto& rec : filtered.accepted)
    ds.records.push_back(DatasetRecord{std::move(rec.smiles), std::move(rec.mol), rec.target});
  for (auto& rej : filtered.rejected) ds.rejected.push_back(std::move(rej));

  if (ds.records.empty())
    throw std::runtime_error("dataset " + schema.name + ": zero valid rows in " + path);
  log::info("dataset " + schema.name + ": " + std::to_string(ds.loaded_rows) + " rows, " +
            std::to_string(ds.records.size()) + " accepted, " +
            std::to_string(ds.rejected.size()) + " rejected");
  return ds;
}

}  // namespace molprop::pipeline
