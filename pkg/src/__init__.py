# NetFactor
