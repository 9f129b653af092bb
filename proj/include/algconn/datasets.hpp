#pragma once

// Bundled copies of two small undirected benchmark networks, plus lookup of
// named datasets by generator spec or the SPECAUG_DATA_DIR cache.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>

#include "algconn/error.hpp"
#include "algconn/generators.hpp"
#include "algconn/graph.hpp"

namespace algconn {

/// Zachary's karate club, nodes labelled 1..34 (34 is the administrator).
inline constexpr std::string_view kKarateEdgeList =
    "1 2\n1 3\n1 4\n1 5\n1 6\n1 7\n1 8\n1 9\n1 11\n1 12\n1 13\n1 14\n1 18\n1 20\n"
    "1 22\n1 32\n2 3\n2 4\n2 8\n2 14\n2 18\n2 20\n2 22\n2 31\n3 4\n3 8\n3 9\n3 10\n"
    "3 14\n3 28\n3 29\n3 33\n4 8\n4 13\n4 14\n5 7\n5 11\n6 7\n6 11\n6 17\n7 17\n"
    "9 31\n9 33\n9 34\n10 34\n14 34\n15 33\n15 34\n16 33\n16 34\n19 33\n19 34\n"
    "20 34\n21 33\n21 34\n23 33\n23 34\n24 26\n24 28\n24 30\n24 33\n24 34\n25 26\n"
    "25 28\n25 32\n26 32\n27 30\n27 34\n28 34\n29 32\n29 34\n30 33\n30 34\n31 33\n"
    "31 34\n32 33\n32 34\n33 34\n";

/// Co-appearance network of Les Miserables characters (unweighted, spaces in
/// names replaced by underscores).
inline constexpr std::string_view kLesMiserablesEdgeList =
    "Napoleon Myriel\nMyriel MlleBaptistine\nMyriel MmeMagloire\n"
    "Myriel CountessDeLo\nMyriel Geborand\nMyriel Champtercier\nMyriel Cravatte\n"
    "Myriel Count\nMyriel OldMan\nMyriel Valjean\nMlleBaptistine MmeMagloire\n"
    "MlleBaptistine Valjean\nMmeMagloire Valjean\nValjean Labarre\n"
    "Valjean Marguerite\nValjean MmeDeR\nValjean Isabeau\nValjean Gervais\n"
    "Valjean Fantine\nValjean MmeThenardier\nValjean Thenardier\nValjean Cosette\n"
    "Valjean Javert\nValjean Fauchelevent\nValjean Bamatabois\nValjean Simplice\n"
    "Valjean Scaufflaire\nValjean Woman1\nValjean Judge\nValjean Champmathieu\n"
    "Valjean Brevet\nValjean Chenildieu\nValjean Cochepaille\nValjean Woman2\n"
    "Valjean MotherInnocent\nValjean Gavroche\nValjean Gillenormand\n"
    "Valjean MlleGillenormand\nValjean Marius\nValjean Enjolras\nValjean Bossuet\n"
    "Valjean Gueulemer\nValjean Babet\nValjean Claquesous\nValjean Montparnasse\n"
    "Valjean Toussaint\nMarguerite Fantine\nListolier Tholomyes\nListolier Fameuil\n"
    "Listolier Blacheville\nListolier Favourite\nListolier Dahlia\n"
    "Listolier Zephine\nListolier Fantine\nTholomyes Fameuil\nTholomyes Blacheville\n"
    "Tholomyes Favourite\nTholomyes Dahlia\nTholomyes Zephine\nTholomyes Fantine\n"
    "Tholomyes Cosette\nTholomyes Marius\nFameuil Blacheville\nFameuil Favourite\n"
    "Fameuil Dahlia\nFameuil Zephine\nFameuil Fantine\nBlacheville Favourite\n"
    "Blacheville Dahlia\nBlacheville Zephine\nBlacheville Fantine\nFavourite Dahlia\n"
    "Favourite Zephine\nFavourite Fantine\nDahlia Zephine\nDahlia Fantine\n"
    "Zephine Fantine\nFantine MmeThenardier\nFantine Thenardier\nFantine Javert\n"
    "Fantine Bamatabois\nFantine Perpetue\nFantine Simplice\n"
    "MmeThenardier Thenardier\nMmeThenardier Cosette\nMmeThenardier Javert\n"
    "MmeThenardier Eponine\nMmeThenardier Anzelma\nMmeThenardier Magnon\n"
    "MmeThenardier Gueulemer\nMmeThenardier Babet\nMmeThenardier Claquesous\n"
    "Thenardier Cosette\nThenardier Javert\nThenardier Pontmercy\n"
    "Thenardier Boulatruelle\nThenardier Eponine\nThenardier Anzelma\n"
    "Thenardier Gavroche\nThenardier Marius\nThenardier Gueulemer\nThenardier Babet\n"
    "Thenardier Claquesous\nThenardier Montparnasse\nThenardier Brujon\n"
    "Cosette Javert\nCosette Woman2\nCosette Gillenormand\nCosette MlleGillenormand\n"
    "Cosette LtGillenormand\nCosette Marius\nCosette Toussaint\nJavert Fauchelevent\n"
    "Javert Bamatabois\nJavert Simplice\nJavert Woman1\nJavert Woman2\n"
    "Javert Gavroche\nJavert Enjolras\nJavert Gueulemer\nJavert Babet\n"
    "Javert Claquesous\nJavert Montparnasse\nJavert Toussaint\n"
    "Fauchelevent MotherInnocent\nFauchelevent Gribier\nBamatabois Judge\n"
    "Bamatabois Champmathieu\nBamatabois Brevet\nBamatabois Chenildieu\n"
    "Bamatabois Cochepaille\nPerpetue Simplice\nJudge Champmathieu\nJudge Brevet\n"
    "Judge Chenildieu\nJudge Cochepaille\nChampmathieu Brevet\n"
    "Champmathieu Chenildieu\nChampmathieu Cochepaille\nBrevet Chenildieu\n"
    "Brevet Cochepaille\nChenildieu Cochepaille\nPontmercy MmePontmercy\n"
    "Pontmercy Marius\nEponine Anzelma\nEponine Marius\nEponine Mabeuf\n"
    "Eponine Courfeyrac\nEponine Gueulemer\nEponine Babet\nEponine Claquesous\n"
    "Eponine Montparnasse\nEponine Brujon\nMmeBurgon Jondrette\nMmeBurgon Gavroche\n"
    "Gavroche Marius\nGavroche Mabeuf\nGavroche Enjolras\nGavroche Combeferre\n"
    "Gavroche Prouvaire\nGavroche Feuilly\nGavroche Courfeyrac\nGavroche Bahorel\n"
    "Gavroche Bossuet\nGavroche Joly\nGavroche Grantaire\nGavroche Gueulemer\n"
    "Gavroche Babet\nGavroche Montparnasse\nGavroche Child1\nGavroche Child2\n"
    "Gavroche Brujon\nGavroche MmeHucheloup\nGillenormand Magnon\n"
    "Gillenormand MlleGillenormand\nGillenormand LtGillenormand\n"
    "Gillenormand Marius\nGillenormand BaronessT\nMlleGillenormand MmePontmercy\n"
    "MlleGillenormand MlleVaubois\nMlleGillenormand LtGillenormand\n"
    "MlleGillenormand Marius\nLtGillenormand Marius\nMarius BaronessT\n"
    "Marius Mabeuf\nMarius Enjolras\nMarius Combeferre\nMarius Feuilly\n"
    "Marius Courfeyrac\nMarius Bahorel\nMarius Bossuet\nMarius Joly\n"
    "Mabeuf Enjolras\nMabeuf Combeferre\nMabeuf Feuilly\nMabeuf Courfeyrac\n"
    "Mabeuf Bahorel\nMabeuf Bossuet\nMabeuf Joly\nMabeuf MotherPlutarch\n"
    "Enjolras Combeferre\nEnjolras Prouvaire\nEnjolras Feuilly\nEnjolras Courfeyrac\n"
    "Enjolras Bahorel\nEnjolras Bossuet\nEnjolras Joly\nEnjolras Grantaire\n"
    "Enjolras Claquesous\nEnjolras MmeHucheloup\nCombeferre Prouvaire\n"
    "Combeferre Feuilly\nCombeferre Courfeyrac\nCombeferre Bahorel\n"
    "Combeferre Bossuet\nCombeferre Joly\nCombeferre Grantaire\nProuvaire Feuilly\n"
    "Prouvaire Courfeyrac\nProuvaire Bahorel\nProuvaire Bossuet\nProuvaire Joly\n"
    "Prouvaire Grantaire\nFeuilly Courfeyrac\nFeuilly Bahorel\nFeuilly Bossuet\n"
    "Feuilly Joly\nFeuilly Grantaire\nCourfeyrac Bahorel\nCourfeyrac Bossuet\n"
    "Courfeyrac Joly\nCourfeyrac Grantaire\nCourfeyrac MmeHucheloup\n"
    "Bahorel Bossuet\nBahorel Joly\nBahorel Grantaire\nBahorel MmeHucheloup\n"
    "Bossuet Joly\nBossuet Grantaire\nBossuet MmeHucheloup\nJoly Grantaire\n"
    "Joly MmeHucheloup\nGrantaire MmeHucheloup\nGueulemer Babet\n"
    "Gueulemer Claquesous\nGueulemer Montparnasse\nGueulemer Brujon\n"
    "Babet Claquesous\nBabet Montparnasse\nBabet Brujon\nClaquesous Montparnasse\n"
    "Claquesous Brujon\nMontparnasse Brujon\nChild1 Child2\n";

inline Graph karate_club() {
  return parse_edge_list(std::string(kKarateEdgeList), false).graph;
}

inline Graph les_miserables() {
  return parse_edge_list(std::string(kLesMiserablesEdgeList), false).graph;
}

/// Directory of fetched datasets: $SPECAUG_DATA_DIR, else ./data.
inline std::filesystem::path data_dir() {
  if (const char* env = std::getenv("SPECAUG_DATA_DIR"); env && *env) return env;
  return "data";
}

/// Path of a cached dataset if it exists.
inline std::optional<std::filesystem::path> cached_dataset(const std::string& name) {
  const auto p = data_dir() / (name + ".txt");
  if (std::filesystem::exists(p)) return p;
  return std::nullopt;
}

inline Graph read_edge_list_file(const std::filesystem::path& path, bool directed) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  return parse_edge_list(in, directed).graph;
}

/// Resolves "karate", "lesmis", a generator spec such as cycle:20, or a
/// cached file <name>.txt under data_dir(). `directed` only affects how a
/// cached edge list is read.
inline Graph load_dataset(const std::string& name, bool directed = false) {
  Graph g;
  if (name == "karate") return karate_club();
  if (name == "lesmis") return les_miserables();
  if (generate_named(name, g)) return g;
  if (const auto p = cached_dataset(name)) return read_edge_list_file(*p, directed);
  throw DataError("dataset '" + name + "' is not bundled and not present in " +
                  data_dir().string() + "; run the fetch command first");
}

}  // namespace algconn
