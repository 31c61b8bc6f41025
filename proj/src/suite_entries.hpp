#pragma once

// Internal: catalog entries with their runners.

#include <functional>

#include "sobolev/corpus.hpp"
#include "sobolev/suite.hpp"

namespace sobolev::suite::detail {

struct Args {
  const EntrySpec& spec;
  std::uint64_t seed;
  std::vector<std::size_t> ladder;

  double number(const std::string& name) const;
  std::size_t integer(const std::string& name) const;
  std::string string(const std::string& name) const;
  std::vector<double> numbers(const std::string& name) const;
  std::vector<std::size_t> integers(const std::string& name) const;
  corpus::SampleSpec sample() const;
};

using Runner = std::function<void(const Args&, reports::Report&)>;

struct Op {
  CatalogEntry info;
  Runner run;
};

const std::vector<Op>& ops();

}  // namespace sobolev::suite::detail
