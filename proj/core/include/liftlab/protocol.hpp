#pragma once

#include "liftlab/decision_tree.hpp"
#include "liftlab/entropy.hpp"
#include "liftlab/f2_linalg.hpp"
#include "liftlab/guard.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace liftlab {

/// StarParity: Alice unrestricted, Bob sends parities of y. ParityParity:
/// both players send parities (needs m a power of two).
enum class ProtocolKind { StarParity, ParityParity };

std::string_view to_string(ProtocolKind kind) noexcept;
ProtocolKind parse_protocol_kind(std::string_view text);

/// Label used by leaves that may only be reached when no valid output exists.
inline constexpr std::string_view kBottom = "BOT";

/// Alice's input: one value in [m] per block. Bob's input: one m-bit field per
/// block, bit j being y_{i,j}.
using AliceInput = std::vector<std::uint32_t>;
using BobInput = std::vector<std::uint64_t>;

struct ProtocolNode {
    enum class Type { Leaf, AliceSplit, AliceParity, BobParity };

    Type type = Type::Leaf;
    std::uint32_t id = 0;                  ///< name used in files and traces
    std::string label;                     ///< leaves
    std::optional<PointerSet> zero_part;   ///< AliceSplit: inputs that send 0
    std::vector<f2::Coord> support;        ///< parity nodes: x-bits or y-coordinates, sorted
    std::uint32_t child[2] = {0, 0};

    [[nodiscard]] bool leaf() const noexcept { return type == Type::Leaf; }
    [[nodiscard]] bool alice() const noexcept { return type == Type::AliceSplit || type == Type::AliceParity; }
};

class ProtocolTree {
public:
    ProtocolTree(std::uint32_t blocks, std::uint32_t m, ProtocolKind kind);

    static ProtocolTree leaf(std::uint32_t blocks, std::uint32_t m, ProtocolKind kind, std::string label);
    static ProtocolTree alice_split(PointerSet zero_part, ProtocolTree zero, ProtocolTree one);
    static ProtocolTree alice_parity(std::vector<f2::Coord> x_bits, ProtocolTree zero, ProtocolTree one);
    static ProtocolTree bob_parity(std::vector<f2::Coord> y_coords, ProtocolTree zero, ProtocolTree one);

    [[nodiscard]] std::uint32_t blocks() const noexcept { return blocks_; }
    [[nodiscard]] std::uint32_t m() const noexcept { return m_; }
    [[nodiscard]] ProtocolKind kind() const noexcept { return kind_; }
    /// log2 m when m is a power of two, else 0.
    [[nodiscard]] std::uint32_t x_bits() const noexcept;

    [[nodiscard]] const std::vector<ProtocolNode>& nodes() const noexcept { return nodes_; }
    [[nodiscard]] const ProtocolNode& node(std::uint32_t v) const { return nodes_.at(v); }
    [[nodiscard]] std::size_t size() const noexcept { return nodes_.size(); }
    [[nodiscard]] std::size_t leaves() const;
    [[nodiscard]] std::size_t depth() const;
    [[nodiscard]] std::vector<std::size_t> leaf_counts() const;

    /// Bit sent at node v on input (x, y).
    [[nodiscard]] bool message(std::uint32_t v, std::span<const std::uint32_t> x, std::span<const std::uint64_t> y) const;

    struct Outcome {
        std::string label;
        std::string transcript;  ///< one '0'/'1' per bit sent
        std::uint32_t leaf = 0;
    };
    [[nodiscard]] Outcome evaluate(std::span<const std::uint32_t> x, std::span<const std::uint64_t> y) const;

    /// Renames node ids to their pre-order positions.
    void renumber();
    void validate() const;

    /// "PROTO N m kind", then pre-order node lines; see docs/formats.md.
    void write(std::ostream& out) const;
    [[nodiscard]] std::string to_string() const;
    static ProtocolTree parse(std::istream& in);
    static ProtocolTree parse(const std::string& text);

private:
    void append(const ProtocolTree& sub);
    static ProtocolTree join(ProtocolNode root, ProtocolTree zero, ProtocolTree one);

    std::uint32_t blocks_;
    std::uint32_t m_;
    ProtocolKind kind_;
    std::vector<ProtocolNode> nodes_;
};

/// A base problem on z in {0,1}^N lifted with IND_m. z is a word with bit i
/// holding z_{i+1}; `allowed[z]` lists the correct outputs. An empty list means
/// no output is correct and only the bottom label is accepted.
struct LiftedProblem {
    std::uint32_t blocks = 0;
    std::uint32_t m = 0;
    std::vector<std::vector<std::string>> allowed;

    static LiftedProblem function(std::uint32_t blocks, std::uint32_t m, const std::vector<std::string>& table);
    static LiftedProblem boolean(std::uint32_t blocks, std::uint32_t m, const std::vector<bool>& table);
    static LiftedProblem relation(std::uint32_t blocks, std::uint32_t m, std::vector<std::vector<std::string>> allowed);

    [[nodiscard]] bool accepts(std::uint64_t z, const std::string& label) const;
};

/// z = IND_m^N(x, y) as a word.
std::uint64_t index_outputs(std::span<const std::uint32_t> x, std::span<const std::uint64_t> y);

struct CounterexamplePair {
    AliceInput x;
    BobInput y;
    std::uint64_t z = 0;
    std::string label;
    std::string transcript;
};

/// First (x, y) on which P answers wrongly, x in lexicographic order and y in
/// increasing packed order. Guarded at 2^24 pairs.
std::optional<CounterexamplePair> check_correct(const ProtocolTree& p, const LiftedProblem& prob,
                                                const Guard& guard = {});

/// Replaces each query of z_i by Alice announcing x_i bit by bit (most
/// significant first) and Bob answering y_{i,x_i}.
/// ParityParity uses AliceParity nodes and needs m a power of two; StarParity
/// uses AliceSplit nodes and ceil(log2 m) bits, sending unreachable values to
/// bottom leaves.
ProtocolTree canonical_protocol(const LiftedProblem& prob, const DecisionTree& dt,
                                ProtocolKind kind = ProtocolKind::ParityParity);

}  // namespace liftlab
