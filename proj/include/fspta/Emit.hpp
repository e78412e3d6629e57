#pragma once

#include "fspta/Andersen.hpp"
#include "fspta/DenseSolver.hpp"
#include "fspta/FsSolver.hpp"

#include <string>
#include <string_view>

namespace fspta {

// Result serializers. Every collection comes out sorted (object lists and
// label lists lexicographically, map keys by nlohmann's ordering), so
// identical results give byte-identical text and digests.
std::string emitFiJson(const Program &prog, const AndersenResult &fi);
std::string emitFsJson(const Program &prog, const FsResult &fs);
std::string emitDenseJson(const Program &prog, const DenseResult &dense);

// {functions:[{name, params, stmts:[{label, op, operands}]}]}
std::string emitProgramJson(const Program &prog);

// "def lX -> use lY [o]" lines, sorted lexicographically.
std::string emitDefUseText(const Program &prog, const DefUseInfo &du);

// key=value report: constraint census, iteration counts, digest of the
// corresponding JSON artifact.
std::string emitFiStats(const Program &prog, const AndersenResult &fi);
std::string emitFsStats(const Program &prog, const FsResult &fs);
std::string emitDenseStats(const Program &prog, const DenseResult &dense);

uint64_t fnv1a(std::string_view s);
std::string digestHex(std::string_view canonicalJson);

// Distinct points-to sets actually materialized, the corpus economy metric:
// fs counts non-empty sets over graph representatives, dense counts its
// non-empty top-level entries plus per-(label, object) out entries.
uint64_t countFsPtSets(const FsResult &fs);
uint64_t countDensePtSets(const DenseResult &dense);

} // namespace fspta
