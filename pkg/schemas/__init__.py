# Typed records for corpora, topics, indicators, models and reports
