Connection connection = DriverManager.getConnection(url, user, password);
PreparedStatement statement = connection.prepareStatement("SELECT name FROM users WHERE id = ?");
statement.setInt(1, id);
ResultSet rs = statement.executeQuery();
