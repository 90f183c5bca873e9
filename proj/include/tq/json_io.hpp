#pragma once

// JSON serialization of the domain types.  Every value round-trips
// bit-exactly: rationals travel as strings, tower elements as integers (or
// integer arrays when the ring has an eps part), matrices as nested arrays.
// Ordered JSON keeps key order stable so byte-identical reruns hash alike.

#include <cstdint>
#include <string>

#include "json.hpp"
#include "tq/deform.hpp"
#include "tq/orbits.hpp"
#include "tq/rings.hpp"

namespace tq {
namespace jsonio {

using Json = nlohmann::ordered_json;

Json ring_to_json(const RingSpec& s);
RingSpec ring_from_json(const Json& j);

Json element_to_json(const RingElement& x);
RingElement element_from_json(const Json& j, const RingSpec& spec);

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, const RingSpec& spec);

Json partition_to_json(const Partition& sigma);
Partition partition_from_json(const Json& j);

Json orbit_to_json(const OrbitRep& rep);
OrbitRep orbit_from_json(const Json& j);

Json tqrep_to_json(const deform::TqRep& rep);
deform::TqRep tqrep_from_json(const Json& j);

Json certificate_to_json(const deform::ObstructionCertificate& cert);
deform::ObstructionCertificate certificate_from_json(const Json& j);

// 64-bit FNV-1a over the canonical dump; reported as "fnv1a64:<hex>".
std::uint64_t fnv1a(const std::string& bytes);
std::string checksum(const Json& j);

Json load_file(const std::string& path);           // error FileUnreadable
void save_file(const std::string& path, const Json& j);

}  // namespace jsonio
}  // namespace tq
