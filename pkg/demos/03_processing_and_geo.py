"""Type-specific processing and offline geographic enrichment."""

from stringkit import (Column, dms_to_decimal, latlon_to_ecef, nearest_record,
                       process_coordinate, process_day, process_month,
                       process_numerical, process_sentence, process_zip,
                       strip_common_affixes, zip_lookup)
from stringkit.geo import bundled_geo_table

# Degree-minute-second coordinates become signed decimal degrees.
print("29d 10' 56.22\" N ->", dms_to_decimal(29, 10, 56.22, "N"))

geo = bundled_geo_table()
pc = process_coordinate(Column("pos", ("N51.32.45 E0.42.28",)), geo)
for out, directive in zip(pc.outputs, pc.directives):
    print(f"  {out.name:<14} {directive:<8} {out.cells[0]}")

# Days shrink to canonical two-letter prefixes.
print("\ndays:", process_day(Column("d", ("Monday", "thursday", "Sat"))).outputs[0].cells)

# Months concatenate year, month and day into one integer.
months = Column("joined", ("January 1 2000", "Apr", "May '97", "August 4, 2017"))
print("months:", process_month(months).outputs[0].cells)

# Shared affixes vanish, then everything non-alphanumeric goes.
emails = Column("mail", ("a.smith@tue.nl", "b.jones@tue.nl"))
print("emails:", strip_common_affixes(emails, strip_prefix=False).cells)

# Range strings map to their midpoint; affixed numbers to the bare value.
print("ranges:", process_numerical(Column("n", ("100 to 200", "1-5"))).outputs[0].cells)
print("affixed:", process_numerical(Column("n", (">10", "$50", "Less than 9"))).outputs[0].cells)

# Sentences keep only their nouns.
review = Column("review", ("This wine has ripe fruit aromas",))
print("nouns:", process_sentence(review).outputs[0].cells)

# Zip codes pull coordinates, country and ECEF from the offline table.
print("\nzip lookup:", zip_lookup("SS2 6ST", geo))
pc = process_zip(Column("zip", ("SS2 6ST", "5612 AB")), geo)
print("zip outputs:", [o.name for o in pc.outputs])

# The same latitude/longitude machinery works directly.
point = latlon_to_ecef(51.4481, 5.4907)
print(f"ECEF of Eindhoven: ({point.x:.0f}, {point.y:.0f}, {point.z:.0f}) m")
print("nearest record to (43.64, -79.39):", nearest_record(43.64, -79.39, geo))
