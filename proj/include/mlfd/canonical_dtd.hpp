#pragma once

namespace mlfd {

/// The complex-object document type, as shipped in assets/mlfd.dtd.
/// Built into the library so tools can operate without locating the asset.
inline constexpr const char* canonical_dtd_text =
    R"(<!ELEMENT COMPLEX_OBJECT (OBJ_NAME, DATE, SOURCE, SUBDOCUMENT+)>
  <!ELEMENT OBJ_NAME PCDATA #REQUIRED>
  <!ELEMENT DATE PCDATA #REQUIRED>
  <!ELEMENT SOURCE PCDATA #REQUIRED>
  <!ELEMENT SUBDOCUMENT (DOC_NAME, TYPE, SIZE, LOCATION, LANGUAGE?, KEYWORD*, (TEXT | RELATIONAL_VIEW | IMAGE | TEMPORAL))>
    <!ELEMENT DOC_NAME PCDATA #REQUIRED>
    <!ELEMENT TYPE PCDATA #REQUIRED>
    <!ELEMENT SIZE PCDATA #REQUIRED>
    <!ELEMENT LOCATION PCDATA #REQUIRED>
    <!ELEMENT LANGUAGE PCDATA #REQUIRED>
    <!ELEMENT KEYWORD PCDATA #REQUIRED>
    <!ELEMENT TEXT (NB_CHAR, NB_LINES, (PLAIN_TEXT | TAGGED_TEXT))>
      <!ELEMENT NB_CHAR PCDATA #IMPLIED>
      <!ELEMENT NB_LINES PCDATA #IMPLIED>
      <!ELEMENT PLAIN_TEXT PCDATA #REQUIRED>
      <!ELEMENT TAGGED_TEXT (CONTENT, LINK*)>
        <!ELEMENT CONTENT PCDATA #REQUIRED>
        <!ELEMENT LINK PCDATA #REQUIRED>
    <!ELEMENT RELATIONAL_VIEW (QUERY?, ATTRIBUTE+, TUPLE*)>
      <!ELEMENT QUERY PCDATA #REQUIRED>
      <!ELEMENT ATTRIBUTE (ATT_NAME, DOMAIN)>
        <!ELEMENT ATT_NAME PCDATA #REQUIRED>
        <!ELEMENT DOMAIN PCDATA #REQUIRED>
      <!ELEMENT TUPLE (ATT_NAME_REF, VALUE)+>
        <!ELEMENT ATT_NAME_REF PCDATA #REQUIRED>
        <!ELEMENT VALUE PCDATA #IMPLIED>
    <!ELEMENT IMAGE (COMPRESSION, FORMAT, RESOLUTION, LENGTH, WIDTH)>
      <!ELEMENT COMPRESSION PCDATA #IMPLIED>
      <!ELEMENT FORMAT PCDATA #IMPLIED>
      <!ELEMENT RESOLUTION PCDATA #IMPLIED>
      <!ELEMENT LENGTH PCDATA #IMPLIED>
      <!ELEMENT WIDTH PCDATA #IMPLIED>
    <!ELEMENT TEMPORAL (DURATION, SPEED, (SOUND | VIDEO))>
      <!ELEMENT DURATION PCDATA #IMPLIED>
      <!ELEMENT SPEED PCDATA #IMPLIED>
      <!ELEMENT SOUND PCDATA #IMPLIED>
      <!ELEMENT VIDEO PCDATA #IMPLIED>
)";

}  // namespace mlfd
