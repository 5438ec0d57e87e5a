@Test
public void addUserTest() {
	driver.findElement(By.id("login")).sendKeys("admin");
	driver.findElement(By.id("password")).sendKeys("admin");
	driver.findElement(By.xpath("//button")).click();
	driver.findElement(By.linkText("Platform administration")).click();
	driver.findElement(By.linkText("Create user")).click();
	driver.findElement(By.id("lastname")).sendKeys("Name001");
	driver.findElement(By.id("firstname")).sendKeys("Firstname001");
	driver.findElement(By.id("username")).sendKeys("user001");
	driver.findElement(By.id("password")).sendKeys("password001");
	driver.findElement(By.id("password_conf")).sendKeys("password001");
	assertEquals("The new user has been created", driver.findElement(By.xpath("//*[@id='claroBody']")).getText());
	driver.findElement(By.id("logout")).click();
}
@Test
public void searchUserTest() {
	driver.findElement(By.id("login")).sendKeys("admin");
	driver.findElement(By.id("password")).sendKeys("admin");
	driver.findElement(By.xpath("//button")).click();
	driver.findElement(By.linkText("Platform administration")).click();
	driver.findElement(By.id("search_user")).sendKeys("user001");
	driver.findElement(By.cssSelector("input[type='submit']")).click();
	assertEquals("Name001", driver.findElement(By.id("L0")).getText());
	assertEquals("Firstname001", driver.findElement(By.xpath("//td[3]")).getText());
	driver.findElement(By.id("logout")).click();
}
